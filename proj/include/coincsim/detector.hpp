#pragma once

#include "coincsim/event.hpp"
#include "coincsim/seed.hpp"
#include "coincsim/sources.hpp"
#include "coincsim/support.hpp"

namespace coincsim {

struct DetectorConfig {
  double efficiency{0.5};
  double dark_rate_hz{100.0};
  TimePs dead_time_ps{0};
  double jitter_sigma_ps{0.0};
  Channel channel{Channel::D1};

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

void validate(const DetectorConfig& cfg);

/// Whether an arrival on `arm` may be detected by a detector on `channel`.
bool arm_feeds_channel(Arm arm, Channel channel) noexcept;

/// Turns arrivals into clicks:
///   1. each arrival kept iff its own uniform draw < efficiency;
///   2. kept times shifted by Gaussian jitter, clamped to [0, duration);
///   3. Poisson dark clicks on `support` merged in;
///   4. non-paralyzable dead time applied to the sorted stream.
/// Stage 1 uses one draw per arrival from a dedicated generator, so raising
/// the efficiency with a fixed seed only ever adds clicks.
EventStream detect(const ArrivalStream& arrivals, const DetectorConfig& cfg, const TimeSupport& support, Seed seed);
EventStream detect(const ArrivalStream& arrivals, const DetectorConfig& cfg, TimePs duration_ps, Seed seed);

/// Dead-time filter alone: drops every event closer than dead_time_ps to the
/// last accepted one.
void apply_dead_time(std::vector<Event>& events, TimePs dead_time_ps);

}  // namespace coincsim
