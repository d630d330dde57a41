#pragma once

#include <cstddef>
#include <vector>

#include "coincsim/event.hpp"

namespace coincsim {

struct GateList;

struct Interval {
  TimePs begin{0};
  TimePs end{0};  ///< exclusive

  TimePs length() const noexcept { return end - begin; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Simulation support: the set of time intervals inside an acquisition over
/// which stationary generators realize their processes. A Poisson process
/// restricted to a subset of time is the same Poisson process on that subset,
/// so a generator run on a gated support yields exactly the events a full run
/// would put inside it.
///
/// Intervals are sorted, pairwise disjoint, non-empty and inside
/// [0, duration_ps).
class TimeSupport {
public:
  /// The whole acquisition [0, duration).
  static TimeSupport full(TimePs duration_ps);

  /// Union of [open - before, close + after) over all gates, clipped to the
  /// acquisition.
  static TimeSupport around_gates(const GateList& gates, TimePs duration_ps, TimePs before_ps, TimePs after_ps);

  /// Builds from arbitrary intervals; they are clipped, sorted and merged.
  static TimeSupport from_intervals(std::vector<Interval> intervals, TimePs duration_ps);

  /// Smallest superset whose intervals are unions of whole blocks of the grid
  /// {phase + k * block} (blocks clipped at the acquisition edges).
  TimeSupport aligned_to_blocks(TimePs block_ps, TimePs phase_ps) const;

  TimePs duration_ps() const noexcept { return duration_ps_; }
  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  TimePs total_length() const noexcept;
  bool is_full() const noexcept;
  bool contains(TimePs t) const noexcept;

  friend bool operator==(const TimeSupport&, const TimeSupport&) = default;

private:
  TimePs duration_ps_{0};
  std::vector<Interval> intervals_;
};

}  // namespace coincsim
