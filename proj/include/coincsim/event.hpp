#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coincsim {

/// Picoseconds since acquisition start.
using TimePs = std::uint64_t;

inline constexpr TimePs kPsPerSecond = 1'000'000'000'000ULL;

/// Detector / electronics channel. The numeric value is the tie-break order
/// for events sharing a timestamp and the TTAG1 channel code.
enum class Channel : std::uint8_t {
  Trigger = 0,  ///< D3, herald detector
  D1 = 1,       ///< ordinary path (45 deg)
  D2 = 2,       ///< extraordinary path (135 deg)
  GateGen = 3,  ///< pulse generator
};

std::string_view to_string(Channel c) noexcept;
/// Accepts the short file codes T, D1, D2, G (and D3 as an alias of T).
std::optional<Channel> channel_from_string(std::string_view s) noexcept;

struct Event {
  Channel channel{Channel::Trigger};
  TimePs t{0};

  friend bool operator==(const Event&, const Event&) = default;
};

/// Stream order: by time, then by channel.
constexpr bool event_before(const Event& a, const Event& b) noexcept {
  return a.t != b.t ? a.t < b.t : static_cast<std::uint8_t>(a.channel) < static_cast<std::uint8_t>(b.channel);
}

/// Detector clicks of one acquisition. Generators always produce streams
/// satisfying the invariants below; streams read from files are checked
/// with validate_stream before use.
///   - events sorted by (t, channel)
///   - every t < duration_ps
struct EventStream {
  TimePs duration_ps{0};
  std::vector<Event> events;

  std::size_t size() const noexcept { return events.size(); }
  bool empty() const noexcept { return events.empty(); }

  friend bool operator==(const EventStream&, const EventStream&) = default;
};

/// Multiset union of two streams in stream order. Throws ConfigError when
/// the durations differ.
EventStream merge_streams(const EventStream& a, const EventStream& b);

/// Events of one channel, order preserved.
EventStream filter_channel(const EventStream& s, Channel c);

struct StreamViolation {
  enum class Kind { Ordering, Range };
  Kind kind;
  std::size_t index;

  friend bool operator==(const StreamViolation&, const StreamViolation&) = default;
};

struct ValidationReport {
  std::vector<StreamViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string describe() const;
};

/// Reports every ordering violation (event sorts before its predecessor)
/// and every out-of-range timestamp. Never throws.
ValidationReport validate_stream(const EventStream& s);

}  // namespace coincsim
