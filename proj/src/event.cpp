#include "coincsim/event.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

#include "coincsim/error.hpp"

namespace coincsim {

std::string_view to_string(Channel c) noexcept {
  switch (c) {
    case Channel::Trigger: return "T";
    case Channel::D1: return "D1";
    case Channel::D2: return "D2";
    case Channel::GateGen: return "G";
  }
  return "?";
}

std::optional<Channel> channel_from_string(std::string_view s) noexcept {
  if (s == "T" || s == "D3") return Channel::Trigger;
  if (s == "D1") return Channel::D1;
  if (s == "D2") return Channel::D2;
  if (s == "G") return Channel::GateGen;
  return std::nullopt;
}

EventStream merge_streams(const EventStream& a, const EventStream& b) {
  if (a.duration_ps != b.duration_ps) {
    throw ConfigError("merge_streams: durations differ (" + std::to_string(a.duration_ps) + " vs " +
                      std::to_string(b.duration_ps) + " ps)");
  }
  EventStream out{a.duration_ps, {}};
  out.events.reserve(a.size() + b.size());
  std::merge(a.events.begin(), a.events.end(), b.events.begin(), b.events.end(), std::back_inserter(out.events),
             event_before);
  return out;
}

EventStream filter_channel(const EventStream& s, Channel c) {
  EventStream out{s.duration_ps, {}};
  std::copy_if(s.events.begin(), s.events.end(), std::back_inserter(out.events),
               [c](const Event& e) { return e.channel == c; });
  return out;
}

ValidationReport validate_stream(const EventStream& s) {
  ValidationReport r;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    if (i > 0 && event_before(s.events[i], s.events[i - 1])) {
      r.violations.push_back({StreamViolation::Kind::Ordering, i});
    }
    if (s.events[i].t >= s.duration_ps) {
      r.violations.push_back({StreamViolation::Kind::Range, i});
    }
  }
  return r;
}

std::string ValidationReport::describe() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << (violations[i].kind == StreamViolation::Kind::Ordering ? "ordering" : "range") << " at index "
       << violations[i].index;
  }
  return os.str();
}

}  // namespace coincsim
