#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coincsim/config.hpp"
#include "coincsim/electronics.hpp"
#include "coincsim/statistics.hpp"

namespace coincsim {

/// Counts of one or more acquisitions. Combined only by addition.
struct AcquisitionTally {
  CountSummary counts;
  std::uint64_t trigger_clicks{0};
  std::uint64_t d1_clicks{0};
  std::uint64_t d2_clicks{0};
  TimePs observed_ps{0};  ///< simulated time the click counts refer to

  AcquisitionTally& operator+=(const AcquisitionTally& o) noexcept;
  friend bool operator==(const AcquisitionTally&, const AcquisitionTally&) = default;
};

struct PointResult {
  std::size_t index{0};
  double multiplier{1.0};
  std::uint64_t acquisitions{0};
  double source_rate_hz{0.0};  ///< scaled rate parameter of the source
  double trigger_rate_cps{0.0};
  double d1_rate_cps{0.0};
  double d2_rate_cps{0.0};
  /// Plot axis: trigger rate for heralded sources, D1 singles for periodically
  /// gated ones, herald rate for the classical-wave model.
  double rate_cps{0.0};
  AcquisitionTally tally;
  std::optional<AlphaEstimate> estimate;  ///< unset when N, N1 or N2 is zero
};

struct ScenarioResult {
  std::string name;
  std::vector<PointResult> points;
  std::optional<AlphaEstimate> overall;  ///< weighted mean over the configured points
  std::size_t overall_points{0};         ///< leading points considered for `overall`
  std::optional<double> separation_from_one;
};

struct RunOptions {
  unsigned jobs{1};
};

/// Scenario with the sweep multiplier of `point` applied to the source rate.
SourceConfig scaled_source(const ScenarioConfig& cfg, std::size_t point);

/// Click streams of one acquisition and the gates they are counted in.
struct AcquisitionStreams {
  EventStream starts;  ///< D3 clicks, or pulse-generator (G) events for periodic gating
  EventStream d1;
  EventStream d2;
  GateList gates;
  TimePs observed_ps{0};

  /// All streams merged into one time-tag stream.
  EventStream merged() const;
};

/// Throws ConfigError for the classical-wave model, which has no time axis.
AcquisitionStreams acquisition_streams(const ScenarioConfig& cfg, std::size_t point, std::uint64_t acquisition);

/// One acquisition: source -> detectors -> gates -> counts. A pure function of
/// (cfg, point, acquisition).
AcquisitionTally run_acquisition(const ScenarioConfig& cfg, std::size_t point, std::uint64_t acquisition);

/// Sum over acquisitions [first, first + count) of one point; independent of
/// `jobs`.
AcquisitionTally run_acquisitions(const ScenarioConfig& cfg, std::size_t point, std::uint64_t first,
                                  std::uint64_t count, unsigned jobs = 1);

ScenarioResult run_scenario(const ScenarioConfig& cfg, RunOptions opts = {});

/// Analytic expected alpha per sweep point, with the detector parameters of
/// the scenario folded in.
std::vector<double> scenario_oracle(const ScenarioConfig& cfg);

/// Heralded-source oracle parameters of one sweep point.
OracleParams pdc_oracle_params(const ScenarioConfig& cfg, std::size_t point);

/// Pair rate giving the requested mean trigger click rate.
double pair_rate_for_trigger_rate(double trigger_rate_cps, const DetectorConfig& trigger);

}  // namespace coincsim
