#pragma once

// Hand-rolled random input generators for the property tests. Every generator
// takes the engine by reference so a failing case is reproducible from the
// case seed printed by the test.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "coincsim/electronics.hpp"
#include "coincsim/event.hpp"

namespace gen {

using Engine = std::mt19937_64;

inline std::uint64_t uniform_u64(Engine& e, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(e);
}

inline double uniform_real(Engine& e, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(e);
}

inline coincsim::Channel channel(Engine& e) {
  return static_cast<coincsim::Channel>(uniform_u64(e, 0, 3));
}

/// Sorted stream of up to max_events, times drawn from a small range so that
/// ties are common.
inline coincsim::EventStream stream(Engine& e, std::size_t max_events, coincsim::TimePs duration) {
  coincsim::EventStream s{duration, {}};
  const std::size_t n = uniform_u64(e, 0, max_events);
  for (std::size_t i = 0; i < n; ++i) s.events.push_back({channel(e), uniform_u64(e, 0, duration - 1)});
  std::sort(s.events.begin(), s.events.end(), coincsim::event_before);
  return s;
}

/// Sorted single-channel stream.
inline coincsim::EventStream channel_stream(Engine& e, coincsim::Channel c, std::size_t max_events,
                                            coincsim::TimePs duration) {
  coincsim::EventStream s{duration, {}};
  const std::size_t n = uniform_u64(e, 0, max_events);
  for (std::size_t i = 0; i < n; ++i) s.events.push_back({c, uniform_u64(e, 0, duration - 1)});
  std::sort(s.events.begin(), s.events.end(), coincsim::event_before);
  return s;
}

/// Gate list with random (possibly overlapping) openings.
inline coincsim::GateList gates(Engine& e, std::size_t max_gates, coincsim::TimePs window, coincsim::TimePs duration) {
  coincsim::GateList g{window, {}};
  const std::size_t n = uniform_u64(e, 0, max_gates);
  for (std::size_t i = 0; i < n; ++i) {
    const coincsim::TimePs open = uniform_u64(e, 0, duration - 1);
    g.gates.push_back({open, open + window});
  }
  std::sort(g.gates.begin(), g.gates.end(), [](const auto& a, const auto& b) { return a.open_ps < b.open_ps; });
  return g;
}

/// Random split of a stream's events into two sorted sub-streams.
inline std::pair<coincsim::EventStream, coincsim::EventStream> split(Engine& e, const coincsim::EventStream& s) {
  coincsim::EventStream a{s.duration_ps, {}};
  coincsim::EventStream b{s.duration_ps, {}};
  for (const auto& ev : s.events) (uniform_u64(e, 0, 1) ? a : b).events.push_back(ev);
  return {a, b};
}

}  // namespace gen
