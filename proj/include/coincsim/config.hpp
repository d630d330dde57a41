#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coincsim/detector.hpp"
#include "coincsim/electronics.hpp"
#include "coincsim/seed.hpp"
#include "coincsim/sources.hpp"

namespace coincsim {

using SourceConfig = std::variant<PdcSourceConfig, CoherentSourceConfig, ThermalSourceConfig, ClassicalWaveConfig>;

enum class SourceModel : std::uint8_t { Pdc, Coherent, ThermalIndependent, ThermalShared, ClassicalWave };

SourceModel source_model(const SourceConfig& s) noexcept;
std::string_view to_string(SourceModel m) noexcept;

/// How the simulator chooses the time span it realizes for periodically gated
/// sources. Gated simulates only the gate windows (plus a jitter margin) and
/// is exact for zero dead time; Auto picks Gated whenever that holds.
enum class SupportMode : std::uint8_t { Auto, Full, Gated };

struct ScenarioConfig {
  std::string name{"scenario"};
  SourceConfig source{PdcSourceConfig{}};

  DetectorConfig d1{0.5, 100.0, 0, 0.0, Channel::D1};
  DetectorConfig d2{0.5, 100.0, 0, 0.0, Channel::D2};
  DetectorConfig trigger{0.4, 100.0, 0, 0.0, Channel::Trigger};

  TimePs window_ps{kDefaultWindowPs};
  std::uint64_t acquisitions{500};
  TimePs acquisition_duration_ps{kPsPerSecond};

  /// Rate multipliers applied to the source's rate parameter, one per point.
  std::vector<double> sweep{1.0};
  /// Optional per-point acquisition counts (empty, or one per sweep point).
  std::vector<std::uint64_t> acquisitions_per_point;
  /// Number of leading points entering the overall weighted mean (all if unset).
  std::optional<std::size_t> weighted_points;

  double gate_rate_hz{65'000.0};  ///< pulse generator, for periodically gated sources
  GatePolicy gate_policy{};
  SupportMode support{SupportMode::Auto};

  SeedSpec seed{1};
  Metadata metadata;

  std::uint64_t acquisitions_for_point(std::size_t point) const;
  SourceModel model() const noexcept { return source_model(source); }
  /// True for sources gated by the pulse generator rather than by D3.
  bool periodic_gating() const noexcept;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Full domain validation; throws ConfigError naming the field path.
void validate(const ScenarioConfig& cfg);

/// Parses the scenario text format (see README "Scenario files"). Defaults
/// are applied and the result validated. Syntax errors carry the line
/// number; unknown sections or keys are rejected.
ScenarioConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

ScenarioConfig load_config_file(const std::string& path);

}  // namespace coincsim
