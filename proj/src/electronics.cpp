#include "coincsim/electronics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "coincsim/error.hpp"

namespace coincsim {

bool CountSummary::consistent() const noexcept { return Nc <= std::min(N1, N2) && std::max(N1, N2) <= N; }

GateList make_gates_from_trigger(const EventStream& trigger_events, TimePs window_ps, GatePolicy policy) {
  if (window_ps == 0) throw ConfigError("window_ps must be positive", "scenario.window_ps");
  GateList out;
  out.window_ps = window_ps;
  out.gates.reserve(trigger_events.size());
  const bool drop = policy.overlap == OverlapPolicy::DropOverlapping;
  const TimePs busy = window_ps + (drop ? policy.busy_extension_ps : 0);
  bool have_last = false;
  TimePs last_open = 0;
  for (const Event& e : trigger_events.events) {
    if (drop && have_last && e.t - last_open < busy) continue;
    out.gates.push_back({e.t, e.t + window_ps});
    last_open = e.t;
    have_last = true;
  }
  return out;
}

GateList make_gates_periodic(double rate_hz, TimePs duration_ps, TimePs window_ps) {
  if (!(std::isfinite(rate_hz) && rate_hz > 0.0)) {
    throw ConfigError("gate rate must be finite and positive", "gating.rate_hz");
  }
  if (window_ps == 0) throw ConfigError("window_ps must be positive", "scenario.window_ps");
  const double period_d = std::round(1e12 / rate_hz);
  if (period_d < 1.0) throw ConfigError("gate rate above 1 THz", "gating.rate_hz");
  const TimePs period = static_cast<TimePs>(period_d);
  if (window_ps >= period) {
    throw ConfigError("periodic gates overlap: window " + std::to_string(window_ps) + " ps >= period " +
                          std::to_string(period) + " ps",
                      "gating.rate_hz");
  }
  GateList out;
  out.window_ps = window_ps;
  if (duration_ps == 0) return out;

  // Number of openings k / rate strictly before the end of the acquisition.
  const double x = static_cast<double>(duration_ps) * rate_hz / 1e12;
  const double nearest = std::round(x);
  const double n_d = std::abs(x - nearest) <= 1e-9 * std::max(1.0, x) ? nearest : std::ceil(x);
  const auto n = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n_d));
  out.gates.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const TimePs open = k * period;
    if (open >= duration_ps) break;
    out.gates.push_back({open, open + window_ps});
  }
  return out;
}

CountSummary count_gates(const GateList& gates, const EventStream& d1, const EventStream& d2) {
  CountSummary c;
  c.N = gates.size();
  const auto& e1 = d1.events;
  const auto& e2 = d2.events;
  std::size_t i1 = 0;
  std::size_t i2 = 0;
  for (const Gate& g : gates.gates) {
    while (i1 < e1.size() && e1[i1].t < g.open_ps) ++i1;
    while (i2 < e2.size() && e2[i2].t < g.open_ps) ++i2;
    const bool h1 = i1 < e1.size() && e1[i1].t < g.close_ps;
    const bool h2 = i2 < e2.size() && e2[i2].t < g.close_ps;
    c.N1 += h1;
    c.N2 += h2;
    c.Nc += h1 && h2;
  }
  return c;
}

CountSummary count_bernoulli_gates(std::span<const GateProbabilities> gates, Seed seed) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CountSummary c;
  c.N = gates.size();
  for (const GateProbabilities& g : gates) {
    const bool h1 = u(rng) < g.p1;
    const bool h2 = u(rng) < g.p2;
    c.N1 += h1;
    c.N2 += h2;
    c.Nc += h1 && h2;
  }
  return c;
}

CountSummary count_bernoulli_gates(std::uint64_t n_gates, double p1, double p2, Seed seed) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CountSummary c;
  c.N = n_gates;
  for (std::uint64_t i = 0; i < n_gates; ++i) {
    const bool h1 = u(rng) < p1;
    const bool h2 = u(rng) < p2;
    c.N1 += h1;
    c.N2 += h2;
    c.Nc += h1 && h2;
  }
  return c;
}

std::uint64_t Histogram::total() const noexcept { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

Histogram time_difference_histogram(const EventStream& starts, const EventStream& stops, std::int64_t lo_ps,
                                    std::int64_t hi_ps, std::int64_t bin_width_ps) {
  if (bin_width_ps <= 0) throw ConfigError("histogram bin width must be positive", "bin_width_ps");
  if (hi_ps <= lo_ps) throw ConfigError("histogram range must satisfy lo < hi", "range_ps");
  Histogram h;
  h.bin_width_ps = bin_width_ps;
  h.lo_ps = lo_ps;
  h.hi_ps = hi_ps;
  h.counts.assign(static_cast<std::size_t>((hi_ps - lo_ps + bin_width_ps - 1) / bin_width_ps), 0);

  const auto& st = stops.events;
  std::size_t j = 0;
  for (const Event& s : starts.events) {
    const auto t0 = static_cast<std::int64_t>(s.t);
    // Starts are sorted, so the first admissible stop only moves forward.
    while (j < st.size() && static_cast<std::int64_t>(st[j].t) - t0 < lo_ps) ++j;
    if (j == st.size()) break;
    const std::int64_t dt = static_cast<std::int64_t>(st[j].t) - t0;
    if (dt < hi_ps) ++h.counts[static_cast<std::size_t>((dt - lo_ps) / bin_width_ps)];
  }
  return h;
}

}  // namespace coincsim
