#include <doctest.h>

#include <algorithm>

#include "coincsim/error.hpp"
#include "coincsim/event.hpp"
#include "coincsim/seed.hpp"
#include "support/gen.hpp"

using namespace coincsim;

TEST_CASE("channel codes") {
  CHECK(to_string(Channel::Trigger) == "T");
  CHECK(to_string(Channel::GateGen) == "G");
  CHECK(channel_from_string("D1") == Channel::D1);
  CHECK(channel_from_string("D3") == Channel::Trigger);
  CHECK_FALSE(channel_from_string("D4").has_value());
  CHECK_FALSE(channel_from_string("").has_value());
}

TEST_CASE("merge_streams examples") {
  const EventStream empty{100, {}};
  CHECK(merge_streams(empty, empty) == empty);

  const EventStream s{100, {{Channel::D1, 4}, {Channel::D2, 9}}};
  CHECK(merge_streams(s, empty) == s);
  CHECK(merge_streams(empty, s) == s);

  const EventStream a{100, {{Channel::D1, 5}}};
  const EventStream b{100, {{Channel::D2, 3}}};
  const EventStream m = merge_streams(a, b);
  REQUIRE(m.size() == 2);
  CHECK(m.events[0] == Event{Channel::D2, 3});
  CHECK(m.events[1] == Event{Channel::D1, 5});
}

TEST_CASE("merge_streams breaks ties by channel") {
  const EventStream a{10, {{Channel::D2, 5}}};
  const EventStream b{10, {{Channel::Trigger, 5}}};
  const EventStream m = merge_streams(a, b);
  CHECK(m.events[0].channel == Channel::Trigger);
  CHECK(m.events[1].channel == Channel::D2);
}

TEST_CASE("merge_streams rejects mismatched durations") {
  CHECK_THROWS_AS(merge_streams(EventStream{10, {}}, EventStream{11, {}}), ConfigError);
}

TEST_CASE("merge_streams is commutative and associative") {
  gen::Engine e(11);
  for (int i = 0; i < 500; ++i) {
    CAPTURE(i);
    const auto a = gen::stream(e, 12, 40);
    const auto b = gen::stream(e, 12, 40);
    const auto c = gen::stream(e, 12, 40);
    CHECK(merge_streams(a, b) == merge_streams(b, a));
    const auto ab_c = merge_streams(merge_streams(a, b), c);
    CHECK(ab_c == merge_streams(a, merge_streams(b, c)));
    CHECK(ab_c.size() == a.size() + b.size() + c.size());
    CHECK(validate_stream(ab_c).ok());
  }
}

TEST_CASE("filter_channel keeps order") {
  const EventStream s{100, {{Channel::D1, 1}, {Channel::D2, 2}, {Channel::D1, 3}}};
  const EventStream f = filter_channel(s, Channel::D1);
  REQUIRE(f.size() == 2);
  CHECK(f.duration_ps == 100);
  CHECK(f.events[1].t == 3);
}

TEST_CASE("validate_stream examples") {
  CHECK(validate_stream(EventStream{10, {{Channel::D1, 1}, {Channel::D2, 1}, {Channel::D1, 9}}}).ok());

  const auto r = validate_stream(EventStream{10, {{Channel::D1, 7}, {Channel::D1, 3}}});
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0] == StreamViolation{StreamViolation::Kind::Ordering, 1});

  const auto edge = validate_stream(EventStream{10, {{Channel::D1, 10}}});
  REQUIRE(edge.violations.size() == 1);
  CHECK(edge.violations[0].kind == StreamViolation::Kind::Range);
  CHECK(edge.violations[0].index == 0);
  CHECK_FALSE(edge.describe().empty());
}

TEST_CASE("validate_stream reports every violation") {
  const auto r = validate_stream(EventStream{10, {{Channel::D2, 5}, {Channel::D1, 5}, {Channel::D1, 12}, {Channel::D1, 2}}});
  CHECK(r.violations.size() == 3);
}

TEST_CASE("seed derivation is stable and label sensitive") {
  const SeedSpec s{42};
  CHECK(s.derive(0, "a") == s.derive(0, "a"));
  CHECK_FALSE(s.derive(0, "a") == s.derive(1, "a"));
  CHECK_FALSE(s.derive(0, "a") == s.derive(0, "b"));
  CHECK_FALSE(SeedSpec{43}.derive(0, "a") == s.derive(0, "a"));
  const Seed root{7};
  CHECK(root.child("x") == root.child("x"));
  CHECK_FALSE(root.child("x") == root.child("y"));
  Rng r1 = make_rng(root);
  Rng r2 = make_rng(root);
  CHECK(r1() == r2());
}
