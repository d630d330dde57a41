#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coincsim/event.hpp"
#include "coincsim/seed.hpp"
#include "coincsim/support.hpp"

namespace coincsim {

/// Optical arm an arrival travels on before detection.
enum class Arm : std::uint8_t {
  TriggerArm = 0,
  IdlerUndecided = 1,  ///< heralded idler before the polarization split
  IdlerPath1 = 2,
  IdlerPath2 = 3,
  Beam1 = 4,
  Beam2 = 5,
};

std::string_view to_string(Arm a) noexcept;

struct Arrival {
  TimePs t{0};
  Arm arm{Arm::TriggerArm};

  friend bool operator==(const Arrival&, const Arrival&) = default;
};

/// Photon arrivals (pre-detection) sorted by (t, arm).
struct ArrivalStream {
  TimePs duration_ps{0};
  std::vector<Arrival> arrivals;

  std::size_t size() const noexcept { return arrivals.size(); }
  bool empty() const noexcept { return arrivals.empty(); }

  friend bool operator==(const ArrivalStream&, const ArrivalStream&) = default;
};

/// Descriptive optical parameters carried along with a source; never used in
/// any computation.
using Metadata = std::map<std::string, std::string>;

struct PdcSourceConfig {
  double pair_rate_hz{10'000.0};
  double pair_jitter_ps{0.0};       ///< Gaussian sigma of idler time relative to trigger
  double polarization_split{0.5};   ///< probability the idler takes path 1
  Metadata metadata;

  friend bool operator==(const PdcSourceConfig&, const PdcSourceConfig&) = default;
};

struct CoherentSourceConfig {
  double beam1_rate_hz{0.0};
  double beam2_rate_hz{0.0};
  Metadata metadata;

  friend bool operator==(const CoherentSourceConfig&, const CoherentSourceConfig&) = default;
};

enum class ThermalMode : std::uint8_t { IndependentArms, SharedSingleMode };

struct ThermalSourceConfig {
  ThermalMode mode{ThermalMode::IndependentArms};
  double mean_rate_hz{0.0};  ///< per arm (IndependentArms) or total (SharedSingleMode)
  double coherence_time_ps{1000.0};
  double split_fraction{0.5};  ///< SharedSingleMode: share of the intensity sent to Beam1
  Metadata metadata;

  friend bool operator==(const ThermalSourceConfig&, const ThermalSourceConfig&) = default;
};

enum class IntensityDistribution : std::uint8_t { Constant, Exponential, Mixture };

/// Largest mean per-gate intensity accepted by the classical-wave model.
inline constexpr double kLinearResponseCap = 0.1;

struct ClassicalWaveConfig {
  double herald_rate_hz{20'000.0};
  double per_gate_intensity_mean{0.05};
  double split_fraction{0.5};
  IntensityDistribution intensity_distribution{IntensityDistribution::Constant};
  double mixture_weight{0.5};  ///< Mixture: probability of an exponential draw
  Metadata metadata;

  friend bool operator==(const ClassicalWaveConfig&, const ClassicalWaveConfig&) = default;
};

void validate(const PdcSourceConfig& cfg);
void validate(const CoherentSourceConfig& cfg);
void validate(const ThermalSourceConfig& cfg);
void validate(const ClassicalWaveConfig& cfg);

/// Homogeneous Poisson process on `support`, all arrivals on `arm`.
/// Throws ConfigError for a negative or non-finite rate.
ArrivalStream gen_poisson_arrivals(double rate_hz, const TimeSupport& support, Arm arm, Seed seed);
ArrivalStream gen_poisson_arrivals(double rate_hz, TimePs duration_ps, Arm arm, Seed seed);

struct PdcArrivals {
  ArrivalStream trigger;  ///< TriggerArm
  ArrivalStream idler;    ///< IdlerUndecided, index-aligned with trigger
};

/// Correlated pairs at Poisson creation times. Element i of `idler` belongs to
/// element i of `trigger`; with non-zero jitter the idler stream is re-sorted
/// and that alignment is lost.
PdcArrivals gen_pdc_pairs(const PdcSourceConfig& cfg, TimePs duration_ps, Seed seed);

/// Sends each undecided idler to exactly one of the two paths, path 1 with
/// probability `split`. Throws ConfigError if an input arrival is not an
/// undecided idler.
ArrivalStream project_idler_path(const ArrivalStream& idler, Seed seed, double split = 0.5);

/// Beam1/Beam2 arrivals of a thermal source. SharedSingleMode uses a
/// piecewise-constant exponential intensity on blocks of one coherence time,
/// with a random block-grid phase per call.
ArrivalStream gen_thermal_arrivals(const ThermalSourceConfig& cfg, const TimeSupport& support, Seed seed);
ArrivalStream gen_thermal_arrivals(const ThermalSourceConfig& cfg, TimePs duration_ps, Seed seed);

/// Beam1/Beam2 Poisson arrivals of an attenuated laser.
ArrivalStream gen_coherent_arrivals(const CoherentSourceConfig& cfg, const TimeSupport& support, Seed seed);

struct GateProbabilities {
  double p1{0.0};
  double p2{0.0};
};

/// Per-gate detection probabilities of a classical field divided at the
/// splitter: p1 = q I, p2 = (1 - q) I. Exponential draws are clamped at I = 1.
std::vector<GateProbabilities> gen_classical_wave_gates(const ClassicalWaveConfig& cfg, std::size_t n_gates, Seed seed);

/// Arrivals on one arm, order preserved.
ArrivalStream select_arm(const ArrivalStream& s, Arm arm);

}  // namespace coincsim
