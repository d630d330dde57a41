#include "coincsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "coincsim/detector.hpp"
#include "coincsim/error.hpp"
#include "coincsim/sources.hpp"
#include "coincsim/support.hpp"

namespace coincsim {

namespace {

constexpr double kPs = 1e12;

/// Stage seeds of one acquisition; the point index is part of the label so
/// every point draws from its own streams.
struct StageSeeds {
  const SeedSpec& spec;
  std::uint64_t acquisition;
  std::string prefix;

  Seed operator()(std::string_view stage) const { return spec.derive(acquisition, prefix + std::string(stage)); }
};

/// Simulating only around the gates is exact when no click outside the
/// margin can influence a click inside a gate, i.e. with zero dead time.
bool use_gated_support(const ScenarioConfig& cfg) {
  if (!cfg.periodic_gating()) return false;
  switch (cfg.support) {
    case SupportMode::Full: return false;
    case SupportMode::Gated: return true;
    case SupportMode::Auto: return cfg.d1.dead_time_ps == 0 && cfg.d2.dead_time_ps == 0;
  }
  return false;
}

AcquisitionStreams heralded_streams(const ScenarioConfig& cfg, const PdcSourceConfig& src, const StageSeeds& seed) {
  const TimePs D = cfg.acquisition_duration_ps;
  const PdcArrivals pairs = gen_pdc_pairs(src, D, seed("pdc.pairs"));
  const ArrivalStream paths = project_idler_path(pairs.idler, seed("pdc.path"), src.polarization_split);
  AcquisitionStreams s;
  s.starts = detect(pairs.trigger, cfg.trigger, D, seed("detect.D3"));
  s.d1 = detect(select_arm(paths, Arm::IdlerPath1), cfg.d1, D, seed("detect.D1"));
  s.d2 = detect(select_arm(paths, Arm::IdlerPath2), cfg.d2, D, seed("detect.D2"));
  s.gates = make_gates_from_trigger(s.starts, cfg.window_ps, cfg.gate_policy);
  s.observed_ps = D;
  return s;
}

AcquisitionStreams periodic_streams(const ScenarioConfig& cfg, const SourceConfig& src, const StageSeeds& seed) {
  const TimePs D = cfg.acquisition_duration_ps;
  AcquisitionStreams s;
  s.gates = make_gates_periodic(cfg.gate_rate_hz, D, cfg.window_ps);
  TimeSupport support = TimeSupport::full(D);
  if (use_gated_support(cfg)) {
    const double sigma = std::max(cfg.d1.jitter_sigma_ps, cfg.d2.jitter_sigma_ps);
    const auto margin = static_cast<TimePs>(std::ceil(8.0 * sigma));
    support = TimeSupport::around_gates(s.gates, D, margin, margin);
  }
  const ArrivalStream arrivals = std::holds_alternative<CoherentSourceConfig>(src)
                                     ? gen_coherent_arrivals(std::get<CoherentSourceConfig>(src), support, seed("source"))
                                     : gen_thermal_arrivals(std::get<ThermalSourceConfig>(src), support, seed("source"));
  s.d1 = detect(select_arm(arrivals, Arm::Beam1), cfg.d1, support, seed("detect.D1"));
  s.d2 = detect(select_arm(arrivals, Arm::Beam2), cfg.d2, support, seed("detect.D2"));
  s.starts.duration_ps = D;
  s.starts.events.reserve(s.gates.size());
  for (const Gate& g : s.gates.gates) s.starts.events.push_back({Channel::GateGen, g.open_ps});
  s.observed_ps = support.total_length();
  return s;
}

AcquisitionTally tally_of(const AcquisitionStreams& s) {
  AcquisitionTally t;
  t.counts = count_gates(s.gates, s.d1, s.d2);
  t.trigger_clicks = s.starts.size();
  t.d1_clicks = s.d1.size();
  t.d2_clicks = s.d2.size();
  t.observed_ps = s.observed_ps;
  return t;
}

AcquisitionTally classical_wave_acquisition(const ScenarioConfig& cfg, const ClassicalWaveConfig& src,
                                            const StageSeeds& seed) {
  const TimePs D = cfg.acquisition_duration_ps;
  const auto n = static_cast<std::size_t>(std::llround(src.herald_rate_hz * static_cast<double>(D) / kPs));
  const auto probs = gen_classical_wave_gates(src, n, seed("source"));
  AcquisitionTally t;
  t.counts = count_bernoulli_gates(probs, seed("fire"));
  t.trigger_clicks = n;
  t.d1_clicks = t.counts.N1;
  t.d2_clicks = t.counts.N2;
  t.observed_ps = D;
  return t;
}

}  // namespace

AcquisitionTally& AcquisitionTally::operator+=(const AcquisitionTally& o) noexcept {
  counts += o.counts;
  trigger_clicks += o.trigger_clicks;
  d1_clicks += o.d1_clicks;
  d2_clicks += o.d2_clicks;
  observed_ps += o.observed_ps;
  return *this;
}

SourceConfig scaled_source(const ScenarioConfig& cfg, std::size_t point) {
  const double m = point < cfg.sweep.size() ? cfg.sweep[point] : 1.0;
  SourceConfig s = cfg.source;
  std::visit(
      [m](auto& src) {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, PdcSourceConfig>) {
          src.pair_rate_hz *= m;
        } else if constexpr (std::is_same_v<T, CoherentSourceConfig>) {
          src.beam1_rate_hz *= m;
          src.beam2_rate_hz *= m;
        } else if constexpr (std::is_same_v<T, ThermalSourceConfig>) {
          src.mean_rate_hz *= m;
        } else {
          src.per_gate_intensity_mean *= m;
        }
      },
      s);
  return s;
}

AcquisitionStreams acquisition_streams(const ScenarioConfig& cfg, std::size_t point, std::uint64_t acquisition) {
  const StageSeeds seed{cfg.seed, acquisition, "p" + std::to_string(point) + "/"};
  const SourceConfig src = scaled_source(cfg, point);
  switch (cfg.model()) {
    case SourceModel::Pdc: return heralded_streams(cfg, std::get<PdcSourceConfig>(src), seed);
    case SourceModel::ClassicalWave:
      throw ConfigError("the classical-wave model has no time-tag representation", "source.model");
    default: return periodic_streams(cfg, src, seed);
  }
}

AcquisitionTally run_acquisition(const ScenarioConfig& cfg, std::size_t point, std::uint64_t acquisition) {
  if (cfg.model() == SourceModel::ClassicalWave) {
    const StageSeeds seed{cfg.seed, acquisition, "p" + std::to_string(point) + "/"};
    return classical_wave_acquisition(cfg, std::get<ClassicalWaveConfig>(scaled_source(cfg, point)), seed);
  }
  return tally_of(acquisition_streams(cfg, point, acquisition));
}

EventStream AcquisitionStreams::merged() const { return merge_streams(merge_streams(starts, d1), d2); }

AcquisitionTally run_acquisitions(const ScenarioConfig& cfg, std::size_t point, std::uint64_t first,
                                  std::uint64_t count, unsigned jobs) {
  std::vector<AcquisitionTally> parts(count);
  const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(jobs, 1, std::max<std::uint64_t>(count, 1)));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) parts[i] = run_acquisition(cfg, point, first + i);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t i = next++; i < count; i = next++) {
          try {
            parts[i] = run_acquisition(cfg, point, first + i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  AcquisitionTally total;
  for (const auto& p : parts) total += p;
  return total;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, RunOptions opts) {
  validate(cfg);
  ScenarioResult r;
  r.name = cfg.name;
  for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
    PointResult p;
    p.index = i;
    p.multiplier = cfg.sweep[i];
    p.acquisitions = cfg.acquisitions_for_point(i);
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PdcSourceConfig>) p.source_rate_hz = s.pair_rate_hz;
          else if constexpr (std::is_same_v<T, CoherentSourceConfig>) p.source_rate_hz = s.beam1_rate_hz;
          else if constexpr (std::is_same_v<T, ThermalSourceConfig>) p.source_rate_hz = s.mean_rate_hz;
          else p.source_rate_hz = s.per_gate_intensity_mean;
        },
        scaled_source(cfg, i));
    p.tally = run_acquisitions(cfg, i, 0, p.acquisitions, opts.jobs);

    const double wall_s = static_cast<double>(p.acquisitions) * static_cast<double>(cfg.acquisition_duration_ps) / kPs;
    const double observed_s = static_cast<double>(p.tally.observed_ps) / kPs;
    p.trigger_rate_cps = static_cast<double>(p.tally.trigger_clicks) / wall_s;
    p.d1_rate_cps = observed_s > 0.0 ? static_cast<double>(p.tally.d1_clicks) / observed_s : 0.0;
    p.d2_rate_cps = observed_s > 0.0 ? static_cast<double>(p.tally.d2_clicks) / observed_s : 0.0;
    p.rate_cps = cfg.periodic_gating() ? p.d1_rate_cps : p.trigger_rate_cps;

    const auto& c = p.tally.counts;
    if (c.N > 0 && c.N1 > 0 && c.N2 > 0) p.estimate = alpha_estimate(c);
    r.points.push_back(std::move(p));
  }

  const std::size_t k = cfg.weighted_points.value_or(r.points.size());
  r.overall_points = k;
  std::vector<AlphaEstimate> chosen;
  for (std::size_t i = 0; i < k && i < r.points.size(); ++i) {
    if (r.points[i].estimate) chosen.push_back(*r.points[i].estimate);
  }
  if (!chosen.empty()) {
    r.overall = weighted_mean(chosen);
    r.separation_from_one = sigma_separation(*r.overall, 1.0);
  }
  return r;
}

double pair_rate_for_trigger_rate(double trigger_rate_cps, const DetectorConfig& trigger) {
  if (!(trigger.efficiency > 0.0)) throw ConfigError("trigger efficiency must be positive", "detector.D3.efficiency");
  return std::max(0.0, trigger_rate_cps - trigger.dark_rate_hz) / trigger.efficiency;
}

OracleParams pdc_oracle_params(const ScenarioConfig& cfg, std::size_t point) {
  const auto src = std::get<PdcSourceConfig>(scaled_source(cfg, point));
  const double W = static_cast<double>(cfg.window_ps) / kPs;
  const double R = src.pair_rate_hz;
  const double q = src.polarization_split;
  // Share of gates opened by a detected herald rather than a D3 dark click.
  const double true_triggers = cfg.trigger.efficiency * R;
  const double all_triggers = true_triggers + cfg.trigger.dark_rate_hz;
  const double f = all_triggers > 0.0 ? true_triggers / all_triggers : 0.0;
  OracleParams p;
  p.split = q;
  p.t1 = cfg.d1.efficiency * f;
  p.t2 = cfg.d2.efficiency * f;
  p.a1 = (R * q * cfg.d1.efficiency + cfg.d1.dark_rate_hz) * W;
  p.a2 = (R * (1.0 - q) * cfg.d2.efficiency + cfg.d2.dark_rate_hz) * W;
  return p;
}

std::vector<double> scenario_oracle(const ScenarioConfig& cfg) {
  validate(cfg);
  std::vector<double> out;
  const double W = static_cast<double>(cfg.window_ps) / kPs;
  for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
    const SourceConfig src = scaled_source(cfg, i);
    switch (cfg.model()) {
      case SourceModel::Pdc: out.push_back(expected_alpha_pdc(pdc_oracle_params(cfg, i))); break;
      case SourceModel::Coherent:
      case SourceModel::ThermalIndependent: out.push_back(expected_alpha_independent()); break;
      case SourceModel::ThermalShared: {
        const auto& th = std::get<ThermalSourceConfig>(src);
        const double block = std::max(1.0, std::round(th.coherence_time_ps));
        const double signal_alpha = expected_alpha_thermal_shared(static_cast<double>(cfg.window_ps), block);
        const double s1 = cfg.d1.efficiency * th.split_fraction * th.mean_rate_hz * W;
        const double s2 = cfg.d2.efficiency * (1.0 - th.split_fraction) * th.mean_rate_hz * W;
        out.push_back(expected_alpha_with_background(signal_alpha, s1, s2, cfg.d1.dark_rate_hz * W,
                                                     cfg.d2.dark_rate_hz * W));
        break;
      }
      case SourceModel::ClassicalWave:
        out.push_back(expected_alpha_classical_wave(std::get<ClassicalWaveConfig>(src)));
        break;
    }
  }
  return out;
}

}  // namespace coincsim
