#include "coincsim/detector.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>
#include <string>

#include "coincsim/error.hpp"

namespace coincsim {

namespace {

std::string field(const DetectorConfig& cfg, const char* name) {
  std::string ch = cfg.channel == Channel::Trigger ? "D3" : std::string(to_string(cfg.channel));
  return "detector." + ch + "." + name;
}

}  // namespace

void validate(const DetectorConfig& cfg) {
  auto fail = [&](const char* name, const char* what) {
    const std::string f = field(cfg, name);
    throw ConfigError(f + ": " + what, f);
  };
  if (!(cfg.efficiency >= 0.0 && cfg.efficiency <= 1.0)) fail("efficiency", "must lie in [0, 1]");
  if (!(std::isfinite(cfg.dark_rate_hz) && cfg.dark_rate_hz >= 0.0)) fail("dark_rate_hz", "must be finite and non-negative");
  if (!(std::isfinite(cfg.jitter_sigma_ps) && cfg.jitter_sigma_ps >= 0.0)) fail("jitter_sigma_ps", "must be finite and non-negative");
}

bool arm_feeds_channel(Arm arm, Channel channel) noexcept {
  switch (channel) {
    case Channel::Trigger: return arm == Arm::TriggerArm;
    case Channel::D1: return arm == Arm::IdlerPath1 || arm == Arm::Beam1;
    case Channel::D2: return arm == Arm::IdlerPath2 || arm == Arm::Beam2;
    case Channel::GateGen: return false;
  }
  return false;
}

void apply_dead_time(std::vector<Event>& events, TimePs dead_time_ps) {
  if (dead_time_ps == 0 || events.empty()) return;
  std::size_t kept = 1;
  TimePs last = events[0].t;
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].t - last >= dead_time_ps) {
      last = events[i].t;
      events[kept++] = events[i];
    }
  }
  events.resize(kept);
}

EventStream detect(const ArrivalStream& arrivals, const DetectorConfig& cfg, const TimeSupport& support, Seed seed) {
  validate(cfg);
  if (support.duration_ps() != arrivals.duration_ps) {
    throw ConfigError("detect: support and arrival durations differ");
  }
  const TimePs duration = arrivals.duration_ps;

  Rng thin_rng = make_rng(seed.child("detect.thin"));
  Rng jitter_rng = make_rng(seed.child("detect.jitter"));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const bool jittered = cfg.jitter_sigma_ps > 0.0;
  std::normal_distribution<double> jitter(0.0, jittered ? cfg.jitter_sigma_ps : 1.0);

  std::vector<Event> kept;
  kept.reserve(static_cast<std::size_t>(static_cast<double>(arrivals.size()) * cfg.efficiency * 1.05) + 16);
  for (const Arrival& a : arrivals.arrivals) {
    if (!arm_feeds_channel(a.arm, cfg.channel)) {
      throw ConfigError("detect: arrival on arm '" + std::string(to_string(a.arm)) + "' cannot reach channel " +
                        std::string(to_string(cfg.channel)));
    }
    const bool hit = u(thin_rng) < cfg.efficiency;
    // Jitter is drawn for every arrival so that the thinning and timing
    // streams stay aligned whatever the efficiency.
    const double dt = jittered ? jitter(jitter_rng) : 0.0;
    if (!hit) continue;
    TimePs t = a.t;
    if (jittered) {
      const double shifted = std::round(static_cast<double>(a.t) + dt);
      t = shifted <= 0.0 ? 0 : (shifted >= static_cast<double>(duration - 1) ? duration - 1 : static_cast<TimePs>(shifted));
    }
    kept.push_back({cfg.channel, t});
  }
  if (jittered) std::sort(kept.begin(), kept.end(), event_before);

  EventStream out{duration, {}};
  if (cfg.dark_rate_hz > 0.0) {
    const ArrivalStream dark = gen_poisson_arrivals(cfg.dark_rate_hz, support, Arm::TriggerArm, seed.child("detect.dark"));
    out.events.reserve(kept.size() + dark.size());
    auto di = dark.arrivals.begin();
    for (const Event& e : kept) {
      for (; di != dark.arrivals.end() && di->t < e.t; ++di) out.events.push_back({cfg.channel, di->t});
      out.events.push_back(e);
    }
    for (; di != dark.arrivals.end(); ++di) out.events.push_back({cfg.channel, di->t});
  } else {
    out.events = std::move(kept);
  }
  apply_dead_time(out.events, cfg.dead_time_ps);
  return out;
}

EventStream detect(const ArrivalStream& arrivals, const DetectorConfig& cfg, TimePs duration_ps, Seed seed) {
  if (duration_ps != arrivals.duration_ps) throw ConfigError("detect: duration differs from the arrival stream");
  return detect(arrivals, cfg, TimeSupport::full(duration_ps), seed);
}

}  // namespace coincsim
