#include "coincsim/sources.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>

#include "coincsim/error.hpp"

namespace coincsim {

namespace {

constexpr double kPsPerSecondD = 1e12;

bool arrival_before(const Arrival& a, const Arrival& b) noexcept {
  return a.t != b.t ? a.t < b.t : static_cast<std::uint8_t>(a.arm) < static_cast<std::uint8_t>(b.arm);
}

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(std::string(field) + ": " + what, field);
}

void require_rate(double r, const char* field) {
  require(std::isfinite(r) && r >= 0.0, field, "rate must be finite and non-negative");
}

std::size_t expected_capacity(double mean) {
  if (!(mean > 0.0)) return 0;
  return static_cast<std::size_t>(mean + 5.0 * std::sqrt(mean) + 16.0);
}

/// Homogeneous Poisson times on the support, in increasing order. Exponential
/// gaps run on the concatenation of the support intervals.
template <class Emit>
void poisson_times(double rate_hz, const TimeSupport& support, Rng& rng, Emit&& emit) {
  if (rate_hz <= 0.0) return;
  std::exponential_distribution<double> gap(rate_hz / kPsPerSecondD);
  double tau = gap(rng);
  double offset = 0.0;
  for (const Interval& iv : support.intervals()) {
    const TimePs len = iv.length();
    const double end = offset + static_cast<double>(len);
    while (tau < end) {
      TimePs local = static_cast<TimePs>(tau - offset);
      if (local >= len) local = len - 1;
      emit(iv.begin + local);
      tau += gap(rng);
    }
    offset = end;
  }
}

ArrivalStream merge_arrivals(ArrivalStream a, const ArrivalStream& b) {
  ArrivalStream out{a.duration_ps, {}};
  out.arrivals.reserve(a.size() + b.size());
  std::merge(a.arrivals.begin(), a.arrivals.end(), b.arrivals.begin(), b.arrivals.end(),
             std::back_inserter(out.arrivals), arrival_before);
  return out;
}

TimePs clamp_time(double t, TimePs duration_ps) {
  if (!(t > 0.0)) return 0;
  const double last = static_cast<double>(duration_ps - 1);
  return t >= last ? duration_ps - 1 : static_cast<TimePs>(std::llround(t));
}

/// Single-mode thermal light on whole coherence blocks. A block with
/// exponential intensity of mean m expected photons holds a geometric number
/// of photons, P(n) = (1/(1+m)) (m/(1+m))^n, so runs of empty blocks and the
/// occupancy of non-empty ones are drawn directly without visiting every
/// block.
class SharedModeGenerator {
public:
  SharedModeGenerator(const ThermalSourceConfig& cfg, TimePs block_ps, const TimeSupport& keep, Rng& rng,
                      ArrivalStream& out)
      : rate_per_ps_(cfg.mean_rate_hz / kPsPerSecondD),
        split_(cfg.split_fraction),
        block_ps_(block_ps),
        keep_(keep),
        rng_(rng),
        out_(out) {
    const double m = rate_per_ps_ * static_cast<double>(block_ps_);
    skip_ = std::geometric_distribution<std::uint64_t>(m / (1.0 + m));
    extra_ = std::geometric_distribution<std::uint64_t>(1.0 / (1.0 + m));
  }

  /// One block of arbitrary length with its own intensity draw.
  void partial_block(TimePs begin, TimePs len) {
    if (len == 0) return;
    std::exponential_distribution<double> intensity(1.0 / rate_per_ps_);
    const double mean = intensity(rng_) * static_cast<double>(len);
    std::poisson_distribution<std::uint64_t> count(mean);
    emit_block(begin, len, mean > 0.0 ? count(rng_) : 0);
  }

  /// `n_blocks` consecutive whole blocks starting at `begin`.
  void full_blocks(TimePs begin, TimePs n_blocks) {
    TimePs k = 0;
    while (true) {
      k += skip_(rng_);
      if (k >= n_blocks) return;
      emit_block(begin + k * block_ps_, block_ps_, 1 + extra_(rng_));
      ++k;
    }
  }

private:
  // Arrivals are uniform within the block, so dropping those outside `keep_`
  // leaves the process on `keep_` unchanged.
  void emit_block(TimePs begin, TimePs len, std::uint64_t n) {
    if (n == 0) return;
    const std::size_t first = out_.arrivals.size();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::uint64_t i = 0; i < n; ++i) {
      TimePs dt = static_cast<TimePs>(u(rng_) * static_cast<double>(len));
      if (dt >= len) dt = len - 1;
      const Arm arm = u(rng_) < split_ ? Arm::Beam1 : Arm::Beam2;
      if (keep_.contains(begin + dt)) out_.arrivals.push_back({begin + dt, arm});
    }
    std::sort(out_.arrivals.begin() + static_cast<std::ptrdiff_t>(first), out_.arrivals.end(), arrival_before);
  }

  double rate_per_ps_;
  double split_;
  TimePs block_ps_;
  const TimeSupport& keep_;
  Rng& rng_;
  ArrivalStream& out_;
  std::geometric_distribution<std::uint64_t> skip_;
  std::geometric_distribution<std::uint64_t> extra_;
};

ArrivalStream shared_single_mode(const ThermalSourceConfig& cfg, const TimeSupport& support, Seed seed) {
  ArrivalStream out{support.duration_ps(), {}};
  if (cfg.mean_rate_hz <= 0.0 || support.intervals().empty()) return out;

  const TimePs block = std::max<TimePs>(1, static_cast<TimePs>(std::llround(cfg.coherence_time_ps)));
  Rng rng = make_rng(seed.child("thermal.shared"));
  const TimePs phase = std::uniform_int_distribution<TimePs>(0, block - 1)(rng);
  const TimeSupport aligned = support.aligned_to_blocks(block, phase);
  out.arrivals.reserve(expected_capacity(cfg.mean_rate_hz * static_cast<double>(support.total_length()) / kPsPerSecondD));

  SharedModeGenerator gen(cfg, block, support, rng, out);
  // First whole-block boundary at or after t.
  auto next_boundary = [&](TimePs t) -> TimePs {
    if (t <= phase) return phase;
    return phase + ((t - phase + block - 1) / block) * block;
  };
  for (const Interval& iv : aligned.intervals()) {
    TimePs pos = iv.begin;
    const TimePs head_end = std::min(next_boundary(pos), iv.end);
    gen.partial_block(pos, head_end - pos);
    pos = head_end;
    const TimePs n_full = (iv.end - pos) / block;
    gen.full_blocks(pos, n_full);
    pos += n_full * block;
    gen.partial_block(pos, iv.end - pos);
  }
  return out;
}

}  // namespace

std::string_view to_string(Arm a) noexcept {
  switch (a) {
    case Arm::TriggerArm: return "trigger";
    case Arm::IdlerUndecided: return "idler";
    case Arm::IdlerPath1: return "idler.path1";
    case Arm::IdlerPath2: return "idler.path2";
    case Arm::Beam1: return "beam1";
    case Arm::Beam2: return "beam2";
  }
  return "?";
}

void validate(const PdcSourceConfig& cfg) {
  require(std::isfinite(cfg.pair_rate_hz) && cfg.pair_rate_hz > 0.0, "source.pair_rate_hz",
          "must be finite and positive");
  require(std::isfinite(cfg.pair_jitter_ps) && cfg.pair_jitter_ps >= 0.0, "source.pair_jitter_ps",
          "must be finite and non-negative");
  require(cfg.polarization_split >= 0.0 && cfg.polarization_split <= 1.0, "source.polarization_split",
          "must lie in [0, 1]");
}

void validate(const CoherentSourceConfig& cfg) {
  require_rate(cfg.beam1_rate_hz, "source.beam1_rate_hz");
  require_rate(cfg.beam2_rate_hz, "source.beam2_rate_hz");
}

void validate(const ThermalSourceConfig& cfg) {
  require_rate(cfg.mean_rate_hz, "source.mean_rate_hz");
  require(std::isfinite(cfg.coherence_time_ps) && cfg.coherence_time_ps > 0.0, "source.coherence_time_ps",
          "must be finite and positive");
  require(cfg.split_fraction >= 0.0 && cfg.split_fraction <= 1.0, "source.split_fraction", "must lie in [0, 1]");
}

void validate(const ClassicalWaveConfig& cfg) {
  require(std::isfinite(cfg.herald_rate_hz) && cfg.herald_rate_hz > 0.0, "source.herald_rate_hz",
          "must be finite and positive");
  require(std::isfinite(cfg.per_gate_intensity_mean) && cfg.per_gate_intensity_mean > 0.0,
          "source.per_gate_intensity_mean", "must be finite and positive");
  require(cfg.per_gate_intensity_mean <= kLinearResponseCap, "source.per_gate_intensity_mean",
          "exceeds the linear-response cap of 0.1");
  require(cfg.split_fraction > 0.0 && cfg.split_fraction < 1.0, "source.split_fraction", "must lie in (0, 1)");
  require(cfg.mixture_weight >= 0.0 && cfg.mixture_weight <= 1.0, "source.mixture_weight", "must lie in [0, 1]");
}

ArrivalStream gen_poisson_arrivals(double rate_hz, const TimeSupport& support, Arm arm, Seed seed) {
  require_rate(rate_hz, "rate_hz");
  ArrivalStream out{support.duration_ps(), {}};
  out.arrivals.reserve(expected_capacity(rate_hz * static_cast<double>(support.total_length()) / kPsPerSecondD));
  Rng rng = make_rng(seed);
  poisson_times(rate_hz, support, rng, [&](TimePs t) { out.arrivals.push_back({t, arm}); });
  return out;
}

ArrivalStream gen_poisson_arrivals(double rate_hz, TimePs duration_ps, Arm arm, Seed seed) {
  return gen_poisson_arrivals(rate_hz, TimeSupport::full(duration_ps), arm, seed);
}

PdcArrivals gen_pdc_pairs(const PdcSourceConfig& cfg, TimePs duration_ps, Seed seed) {
  require_rate(cfg.pair_rate_hz, "source.pair_rate_hz");
  require(std::isfinite(cfg.pair_jitter_ps) && cfg.pair_jitter_ps >= 0.0, "source.pair_jitter_ps",
          "must be finite and non-negative");
  PdcArrivals out{{duration_ps, {}}, {duration_ps, {}}};
  const std::size_t cap = expected_capacity(cfg.pair_rate_hz * static_cast<double>(duration_ps) / kPsPerSecondD);
  out.trigger.arrivals.reserve(cap);
  out.idler.arrivals.reserve(cap);

  Rng rng = make_rng(seed.child("pdc.creation"));
  Rng jitter_rng = make_rng(seed.child("pdc.jitter"));
  std::normal_distribution<double> jitter(0.0, cfg.pair_jitter_ps > 0.0 ? cfg.pair_jitter_ps : 1.0);
  const bool jittered = cfg.pair_jitter_ps > 0.0;
  poisson_times(cfg.pair_rate_hz, TimeSupport::full(duration_ps), rng, [&](TimePs t) {
    out.trigger.arrivals.push_back({t, Arm::TriggerArm});
    const TimePs ti = jittered ? clamp_time(static_cast<double>(t) + jitter(jitter_rng), duration_ps) : t;
    out.idler.arrivals.push_back({ti, Arm::IdlerUndecided});
  });
  if (jittered) std::stable_sort(out.idler.arrivals.begin(), out.idler.arrivals.end(), arrival_before);
  return out;
}

ArrivalStream project_idler_path(const ArrivalStream& idler, Seed seed, double split) {
  require(split >= 0.0 && split <= 1.0, "source.polarization_split", "must lie in [0, 1]");
  ArrivalStream out{idler.duration_ps, {}};
  out.arrivals.reserve(idler.size());
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Arrival& a : idler.arrivals) {
    if (a.arm != Arm::IdlerUndecided) {
      throw ConfigError("project_idler_path: arrival on arm '" + std::string(to_string(a.arm)) +
                        "' is not an undecided idler");
    }
    out.arrivals.push_back({a.t, u(rng) < split ? Arm::IdlerPath1 : Arm::IdlerPath2});
  }
  // Equal timestamps may now carry different arms; restore the tie order.
  if (!std::is_sorted(out.arrivals.begin(), out.arrivals.end(), arrival_before)) {
    std::stable_sort(out.arrivals.begin(), out.arrivals.end(), arrival_before);
  }
  return out;
}

ArrivalStream gen_thermal_arrivals(const ThermalSourceConfig& cfg, const TimeSupport& support, Seed seed) {
  validate(cfg);
  if (cfg.mode == ThermalMode::SharedSingleMode) return shared_single_mode(cfg, support, seed);
  return merge_arrivals(gen_poisson_arrivals(cfg.mean_rate_hz, support, Arm::Beam1, seed.child("thermal.beam1")),
                        gen_poisson_arrivals(cfg.mean_rate_hz, support, Arm::Beam2, seed.child("thermal.beam2")));
}

ArrivalStream gen_thermal_arrivals(const ThermalSourceConfig& cfg, TimePs duration_ps, Seed seed) {
  return gen_thermal_arrivals(cfg, TimeSupport::full(duration_ps), seed);
}

ArrivalStream gen_coherent_arrivals(const CoherentSourceConfig& cfg, const TimeSupport& support, Seed seed) {
  validate(cfg);
  return merge_arrivals(gen_poisson_arrivals(cfg.beam1_rate_hz, support, Arm::Beam1, seed.child("coherent.beam1")),
                        gen_poisson_arrivals(cfg.beam2_rate_hz, support, Arm::Beam2, seed.child("coherent.beam2")));
}

std::vector<GateProbabilities> gen_classical_wave_gates(const ClassicalWaveConfig& cfg, std::size_t n_gates,
                                                        Seed seed) {
  validate(cfg);
  std::vector<GateProbabilities> out;
  out.reserve(n_gates);
  Rng rng = make_rng(seed);
  std::exponential_distribution<double> expo(1.0 / cfg.per_gate_intensity_mean);
  std::bernoulli_distribution pick_expo(cfg.mixture_weight);
  const double q = cfg.split_fraction;
  for (std::size_t i = 0; i < n_gates; ++i) {
    bool exponential = false;
    switch (cfg.intensity_distribution) {
      case IntensityDistribution::Constant: break;
      case IntensityDistribution::Exponential: exponential = true; break;
      case IntensityDistribution::Mixture: exponential = pick_expo(rng); break;
    }
    const double I = exponential ? std::min(expo(rng), 1.0) : cfg.per_gate_intensity_mean;
    out.push_back({q * I, (1.0 - q) * I});
  }
  return out;
}

ArrivalStream select_arm(const ArrivalStream& s, Arm arm) {
  ArrivalStream out{s.duration_ps, {}};
  std::copy_if(s.arrivals.begin(), s.arrivals.end(), std::back_inserter(out.arrivals),
               [arm](const Arrival& a) { return a.arm == arm; });
  return out;
}

}  // namespace coincsim
