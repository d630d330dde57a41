#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coincsim/event.hpp"
#include "coincsim/seed.hpp"
#include "coincsim/sources.hpp"

namespace coincsim {

inline constexpr TimePs kDefaultWindowPs = 7000;

/// Counting window [open_ps, close_ps).
struct Gate {
  TimePs open_ps{0};
  TimePs close_ps{0};

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct GateList {
  TimePs window_ps{kDefaultWindowPs};
  std::vector<Gate> gates;  ///< sorted by open_ps, all of width window_ps

  std::size_t size() const noexcept { return gates.size(); }
  friend bool operator==(const GateList&, const GateList&) = default;
};

enum class OverlapPolicy : std::uint8_t {
  DropOverlapping,  ///< a start arriving while a gate is open is ignored
  AllowOverlap,     ///< every start opens its own gate
};

struct GatePolicy {
  OverlapPolicy overlap{OverlapPolicy::DropOverlapping};
  /// Extra busy time after a gate closes during which starts are ignored
  /// (TAC conversion time). Only used with DropOverlapping.
  TimePs busy_extension_ps{0};

  friend bool operator==(const GatePolicy&, const GatePolicy&) = default;
};

/// N1/N2/Nc are gate counts, not event counts: a gate adds at most one to
/// each. Invariant: Nc <= min(N1, N2), max(N1, N2) <= N.
struct CountSummary {
  std::uint64_t N{0};
  std::uint64_t N1{0};
  std::uint64_t N2{0};
  std::uint64_t Nc{0};

  CountSummary& operator+=(const CountSummary& o) noexcept {
    N += o.N;
    N1 += o.N1;
    N2 += o.N2;
    Nc += o.Nc;
    return *this;
  }
  friend CountSummary operator+(CountSummary a, const CountSummary& b) noexcept { return a += b; }
  friend bool operator==(const CountSummary&, const CountSummary&) = default;

  bool consistent() const noexcept;
};

/// One gate per accepted start event (every event of the stream is a start).
/// Throws ConfigError for window_ps == 0.
GateList make_gates_from_trigger(const EventStream& trigger_events, TimePs window_ps, GatePolicy policy = {});

/// Gates opening at k * round(1e12 / rate_hz) for every k with k / rate_hz
/// before the end of the acquisition (always at least the gate at 0).
/// Throws ConfigError unless window_ps < period.
GateList make_gates_periodic(double rate_hz, TimePs duration_ps, TimePs window_ps);

/// Binary per-gate presence of D1 and D2 events in [open, close), in a single
/// forward scan of both streams. All events of `d1` (`d2`) count as D1 (D2).
CountSummary count_gates(const GateList& gates, const EventStream& d1, const EventStream& d2);

/// Independent Bernoulli firing of both arms per gate with the given
/// probabilities (synthetic gates without time structure).
CountSummary count_bernoulli_gates(std::span<const GateProbabilities> gates, Seed seed);
CountSummary count_bernoulli_gates(std::uint64_t n_gates, double p1, double p2, Seed seed);

/// Multichannel-analyzer view of start-stop delays.
struct Histogram {
  std::int64_t bin_width_ps{1};
  std::int64_t lo_ps{0};
  std::int64_t hi_ps{0};
  std::vector<std::uint64_t> counts;  ///< ceil((hi - lo) / bin_width) bins

  std::uint64_t total() const noexcept;
  friend bool operator==(const Histogram&, const Histogram&) = default;
};

/// TAC semantics: for each start the first stop with delay in [lo, hi) is
/// binned; later stops for that start are ignored. Throws ConfigError unless
/// lo < hi and bin_width > 0.
Histogram time_difference_histogram(const EventStream& starts, const EventStream& stops, std::int64_t lo_ps,
                                    std::int64_t hi_ps, std::int64_t bin_width_ps);

}  // namespace coincsim
