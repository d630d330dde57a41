#include "coincsim/support.hpp"

#include <algorithm>
#include <numeric>

#include "coincsim/electronics.hpp"

namespace coincsim {

namespace {

std::vector<Interval> merge_sorted(std::vector<Interval> v) {
  std::vector<Interval> out;
  out.reserve(v.size());
  for (const Interval& iv : v) {
    if (iv.end <= iv.begin) continue;
    if (!out.empty() && iv.begin <= out.back().end) {
      out.back().end = std::max(out.back().end, iv.end);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

}  // namespace

TimeSupport TimeSupport::full(TimePs duration_ps) {
  TimeSupport s;
  s.duration_ps_ = duration_ps;
  if (duration_ps > 0) s.intervals_.push_back({0, duration_ps});
  return s;
}

TimeSupport TimeSupport::from_intervals(std::vector<Interval> intervals, TimePs duration_ps) {
  for (Interval& iv : intervals) {
    iv.begin = std::min(iv.begin, duration_ps);
    iv.end = std::min(iv.end, duration_ps);
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
  TimeSupport s;
  s.duration_ps_ = duration_ps;
  s.intervals_ = merge_sorted(std::move(intervals));
  return s;
}

TimeSupport TimeSupport::around_gates(const GateList& gates, TimePs duration_ps, TimePs before_ps, TimePs after_ps) {
  std::vector<Interval> v;
  v.reserve(gates.size());
  for (const Gate& g : gates.gates) {
    const TimePs b = g.open_ps > before_ps ? g.open_ps - before_ps : 0;
    v.push_back({b, g.close_ps + after_ps});
  }
  // Gates are sorted by opening time and share one width, so the widened
  // intervals are already sorted.
  for (Interval& iv : v) {
    iv.begin = std::min(iv.begin, duration_ps);
    iv.end = std::min(iv.end, duration_ps);
  }
  TimeSupport s;
  s.duration_ps_ = duration_ps;
  s.intervals_ = merge_sorted(std::move(v));
  return s;
}

TimeSupport TimeSupport::aligned_to_blocks(TimePs block_ps, TimePs phase_ps) const {
  if (block_ps == 0) return *this;
  phase_ps %= block_ps;
  // Block k covers [phase + (k - 1) block, phase + k block), k >= 0, so that
  // block 0 is the (possibly empty) head [.., phase).
  auto block_index = [&](TimePs t) -> TimePs { return t < phase_ps ? 0 : (t - phase_ps) / block_ps + 1; };
  auto block_begin = [&](TimePs k) -> TimePs { return k == 0 ? 0 : phase_ps + (k - 1) * block_ps; };
  std::vector<Interval> v;
  v.reserve(intervals_.size());
  for (const Interval& iv : intervals_) {
    const TimePs k0 = block_index(iv.begin);
    const TimePs k1 = block_index(iv.end - 1);
    v.push_back({block_begin(k0), std::min(block_begin(k1 + 1), duration_ps_)});
  }
  TimeSupport s;
  s.duration_ps_ = duration_ps_;
  s.intervals_ = merge_sorted(std::move(v));
  return s;
}

TimePs TimeSupport::total_length() const noexcept {
  return std::accumulate(intervals_.begin(), intervals_.end(), TimePs{0},
                         [](TimePs acc, const Interval& iv) { return acc + iv.length(); });
}

bool TimeSupport::is_full() const noexcept {
  return duration_ps_ == 0 ? intervals_.empty()
                           : intervals_.size() == 1 && intervals_[0].begin == 0 && intervals_[0].end == duration_ps_;
}

bool TimeSupport::contains(TimePs t) const noexcept {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                             [](TimePs x, const Interval& iv) { return x < iv.begin; });
  if (it == intervals_.begin()) return false;
  --it;
  return t < it->end;
}

}  // namespace coincsim
