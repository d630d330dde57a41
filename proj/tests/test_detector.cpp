#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "coincsim/detector.hpp"
#include "coincsim/error.hpp"
#include "coincsim/sources.hpp"
#include "support/oracles.hpp"

using namespace coincsim;

namespace {

DetectorConfig ideal(Channel c) { return {1.0, 0.0, 0, 0.0, c}; }

ArrivalStream beam1(std::initializer_list<TimePs> ts, TimePs duration) {
  ArrivalStream s{duration, {}};
  for (TimePs t : ts) s.arrivals.push_back({t, Arm::Beam1});
  return s;
}

}  // namespace

TEST_CASE("detect: identity chain") {
  const auto arrivals = gen_poisson_arrivals(1e6, kPsPerSecond / 100, Arm::Beam1, Seed{1});
  const auto clicks = detect(arrivals, ideal(Channel::D1), arrivals.duration_ps, Seed{2});
  REQUIRE(clicks.size() == arrivals.size());
  for (std::size_t i = 0; i < clicks.size(); ++i) {
    REQUIRE(clicks.events[i].t == arrivals.arrivals[i].t);
    REQUIRE(clicks.events[i].channel == Channel::D1);
  }
}

TEST_CASE("detect: zero efficiency and no dark counts") {
  const auto arrivals = gen_poisson_arrivals(1e6, kPsPerSecond / 100, Arm::Beam1, Seed{1});
  DetectorConfig cfg = ideal(Channel::D1);
  cfg.efficiency = 0.0;
  CHECK(detect(arrivals, cfg, arrivals.duration_ps, Seed{2}).empty());
}

TEST_CASE("detect: binomial thinning") {
  const auto arrivals = gen_poisson_arrivals(1e6, kPsPerSecond, Arm::Beam1, Seed{3});
  const double n = static_cast<double>(arrivals.size());
  DetectorConfig cfg = ideal(Channel::D1);
  cfg.efficiency = 0.5;
  const double kept = static_cast<double>(detect(arrivals, cfg, arrivals.duration_ps, Seed{4}).size());
  CHECK(std::abs(kept - 0.5 * n) < 5.0 * std::sqrt(0.25 * n));
}

TEST_CASE("detect: monotone thinning") {
  const auto arrivals = gen_poisson_arrivals(1e5, kPsPerSecond / 10, Arm::Beam1, Seed{5});
  DetectorConfig cfg = ideal(Channel::D1);
  std::vector<TimePs> previous;
  for (double eff : {0.0, 0.1, 0.25, 0.5, 0.7, 0.9, 1.0}) {
    cfg.efficiency = eff;
    const auto clicks = detect(arrivals, cfg, arrivals.duration_ps, Seed{6});
    std::vector<TimePs> now;
    for (const Event& e : clicks.events) now.push_back(e.t);
    CHECK(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
    previous = std::move(now);
  }
  CHECK(previous.size() == arrivals.size());
}

TEST_CASE("detect: dark-only stream is Poisson") {
  DetectorConfig cfg{0.0, 1e6, 0, 0.0, Channel::D2};
  std::vector<std::uint64_t> counts;
  const ArrivalStream none{kPsPerSecond / 100'000, {}};  // 10 us: 10 expected
  for (std::uint64_t i = 0; i < 4000; ++i) counts.push_back(detect(none, cfg, none.duration_ps, Seed{i}).size());
  CHECK(oracle::poisson_chi2_pvalue(counts, 10.0) > 1e-3);
}

TEST_CASE("detect: dead time separation") {
  DetectorConfig cfg{0.8, 1e5, 50'000, 200.0, Channel::D1};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto arrivals = gen_poisson_arrivals(5e6, kPsPerSecond / 1000, Arm::Beam1, Seed{seed});
    const auto clicks = detect(arrivals, cfg, arrivals.duration_ps, Seed{seed + 100});
    REQUIRE(validate_stream(clicks).ok());
    for (std::size_t i = 1; i < clicks.size(); ++i) {
      REQUIRE(clicks.events[i].t - clicks.events[i - 1].t >= cfg.dead_time_ps);
    }
  }
}

TEST_CASE("apply_dead_time is non-paralyzable") {
  std::vector<Event> ev{{Channel::D1, 0}, {Channel::D1, 30}, {Channel::D1, 60}, {Channel::D1, 100}, {Channel::D1, 210}};
  apply_dead_time(ev, 50);
  // 30 is dropped but does not extend the dead time, so 60 is accepted.
  REQUIRE(ev.size() == 3);
  CHECK(ev[0].t == 0);
  CHECK(ev[1].t == 60);
  CHECK(ev[2].t == 210);
}

TEST_CASE("detect: jitter keeps the stream valid at the edges") {
  DetectorConfig cfg{1.0, 0.0, 0, 500.0, Channel::D1};
  const auto arrivals = beam1({0, 1, 2, 997, 998, 999}, 1000);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto clicks = detect(arrivals, cfg, arrivals.duration_ps, Seed{seed});
    REQUIRE(clicks.size() == arrivals.size());
    REQUIRE(validate_stream(clicks).ok());
  }
}

TEST_CASE("detect: rejects arrivals from another arm") {
  CHECK_THROWS_AS(detect(beam1({5}, 10), ideal(Channel::D2), 10, Seed{1}), ConfigError);
  ArrivalStream trig{10, {{5, Arm::TriggerArm}}};
  CHECK_NOTHROW(detect(trig, ideal(Channel::Trigger), 10, Seed{1}));
}

TEST_CASE("arm to channel mapping") {
  CHECK(arm_feeds_channel(Arm::IdlerPath1, Channel::D1));
  CHECK(arm_feeds_channel(Arm::IdlerPath2, Channel::D2));
  CHECK(arm_feeds_channel(Arm::Beam2, Channel::D2));
  CHECK_FALSE(arm_feeds_channel(Arm::IdlerUndecided, Channel::D1));
  CHECK_FALSE(arm_feeds_channel(Arm::Beam1, Channel::Trigger));
}

TEST_CASE("detector validation") {
  DetectorConfig cfg{1.5, 0.0, 0, 0.0, Channel::D1};
  try {
    validate(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "detector.D1.efficiency");
  }
  cfg = {0.5, -1.0, 0, 0.0, Channel::Trigger};
  try {
    validate(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "detector.D3.dark_rate_hz");
  }
}

TEST_CASE("detect: gated support restricts dark counts") {
  const auto support = TimeSupport::from_intervals({{1000, 2000}}, 10'000);
  DetectorConfig cfg{0.0, 1e10, 0, 0.0, Channel::D1};
  const ArrivalStream none{10'000, {}};
  const auto clicks = detect(none, cfg, support, Seed{3});
  CHECK(clicks.size() > 0);
  for (const Event& e : clicks.events) CHECK(support.contains(e.t));
}
