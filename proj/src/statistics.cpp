#include "coincsim/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "coincsim/error.hpp"

namespace coincsim {

AlphaEstimate alpha_estimate(const CountSummary& c) {
  if (c.N == 0 || c.N1 == 0 || c.N2 == 0) {
    throw UndefinedEstimate("alpha undefined: N, N1 and N2 must all be positive (N=" + std::to_string(c.N) +
                            ", N1=" + std::to_string(c.N1) + ", N2=" + std::to_string(c.N2) + ")");
  }
  const auto N = static_cast<double>(c.N);
  const auto N1 = static_cast<double>(c.N1);
  const auto N2 = static_cast<double>(c.N2);
  const auto Nc = static_cast<double>(c.Nc);
  const double scale = N / (N1 * N2);
  const double alpha = Nc * scale;
  const double coincidence_term = scale * std::sqrt(std::max(Nc, 1.0));
  const double singles_term = alpha * std::sqrt(1.0 / N1 + 1.0 / N2);
  return {alpha, std::hypot(coincidence_term, singles_term), c};
}

AlphaEstimate weighted_mean(std::span<const AlphaEstimate> estimates) {
  if (estimates.empty()) throw std::invalid_argument("weighted_mean: no estimates");
  double sw = 0.0;
  double swx = 0.0;
  CountSummary total;
  for (const AlphaEstimate& e : estimates) {
    if (!(e.sigma > 0.0) || !std::isfinite(e.sigma)) {
      throw std::invalid_argument("weighted_mean: every sigma must be finite and positive");
    }
    const double w = 1.0 / (e.sigma * e.sigma);
    sw += w;
    swx += w * e.alpha;
    total += e.counts;
  }
  return {swx / sw, 1.0 / std::sqrt(sw), total};
}

double sigma_separation(const AlphaEstimate& e, double reference) {
  if (!(e.sigma > 0.0)) throw std::invalid_argument("sigma_separation: sigma must be positive");
  return std::abs(e.alpha - reference) / e.sigma;
}

double expected_alpha_pdc(const OracleParams& p) {
  const double A1 = -std::expm1(-p.a1);
  const double A2 = -std::expm1(-p.a2);
  const double q = p.split;
  const double hit1 = p.t1 + (1.0 - p.t1) * A1;  // D1 fires, idler on path 1
  const double hit2 = p.t2 + (1.0 - p.t2) * A2;  // D2 fires, idler on path 2
  const double P1 = q * hit1 + (1.0 - q) * A1;
  const double P2 = q * A2 + (1.0 - q) * hit2;
  const double Pc = q * hit1 * A2 + (1.0 - q) * A1 * hit2;
  const double denom = P1 * P2;
  return denom > 0.0 ? Pc / denom : std::numeric_limits<double>::quiet_NaN();
}

double block_overlap_factor(double window_ps, double tau_ps) {
  if (!(window_ps > 0.0 && tau_ps > 0.0)) {
    throw std::invalid_argument("block_overlap_factor: window and block length must be positive");
  }
  // Lengths in units of the block; s = window start within its block.
  const double x = window_ps / tau_ps;
  auto sum_sq = [x](double s) {
    const double head = std::min(x, 1.0 - s);
    const double rest = x - head;
    const double full = std::floor(rest);
    const double tail = rest - full;
    return head * head + full + tail * tail;
  };
  // sum_sq is quadratic in s on either side of the point where the window end
  // crosses a block boundary, so a 3-point rule is exact on each piece.
  static constexpr std::array<double, 3> nodes{-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr std::array<double, 3> weights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  auto integrate = [&](double a, double b) {
    if (b <= a) return 0.0;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * sum_sq(mid + half * nodes[i]);
    return acc * half;
  };
  const double frac = x - std::floor(x);
  const double kink = frac > 0.0 ? 1.0 - frac : 0.0;
  return (integrate(0.0, kink) + integrate(kink, 1.0)) / (x * x);
}

double expected_alpha_thermal_shared(double window_ps, double coherence_time_ps) {
  return 1.0 + block_overlap_factor(window_ps, coherence_time_ps);
}

double expected_alpha_classical_wave(const ClassicalWaveConfig& cfg) {
  switch (cfg.intensity_distribution) {
    case IntensityDistribution::Constant: return 1.0;
    case IntensityDistribution::Exponential: return 2.0;
    case IntensityDistribution::Mixture: return 1.0 + cfg.mixture_weight;
  }
  return 1.0;
}

double expected_alpha_with_background(double signal_alpha, double s1, double s2, double b1, double b2) {
  const double denom = (s1 + b1) * (s2 + b2);
  if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 + (signal_alpha - 1.0) * s1 * s2 / denom;
}

}  // namespace coincsim
