#include "coincsim/timetag_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "coincsim/error.hpp"

namespace coincsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::optional<std::uint64_t> to_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
  throw DataError("timetag csv line " + std::to_string(line) + ": " + what);
}

EventStream parse_csv(std::string_view text) {
  std::optional<TimePs> duration;
  EventStream s;
  bool header_allowed = true;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "duration_ps=";
      const auto body = trim(line.substr(1));
      if (body.substr(0, key.size()) == key) {
        if (!s.events.empty() || duration) bad_line(line_no, "duration directive must precede all rows");
        duration = to_u64(trim(body.substr(key.size())));
        if (!duration) bad_line(line_no, "malformed duration");
      }
      continue;
    }
    if (header_allowed && line == "channel,t_ps") {
      header_allowed = false;
      continue;
    }
    header_allowed = false;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) bad_line(line_no, "expected 'channel,t_ps'");
    const auto ch = channel_from_string(trim(line.substr(0, comma)));
    if (!ch) bad_line(line_no, "unknown channel '" + std::string(trim(line.substr(0, comma))) + "'");
    const auto t = to_u64(trim(line.substr(comma + 1)));
    if (!t) bad_line(line_no, "malformed timestamp");
    const Event e{*ch, *t};
    if (!s.events.empty() && event_before(e, s.events.back())) bad_line(line_no, "timestamps not sorted");
    if (duration && e.t >= *duration) bad_line(line_no, "timestamp beyond the acquisition duration");
    s.events.push_back(e);
  }
  s.duration_ps = duration ? *duration : (s.events.empty() ? 0 : s.events.back().t + 1);
  return s;
}

std::uint64_t load_le64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void store_le64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

EventStream parse_ttag1(std::span<const std::uint8_t> b) {
  if (b.size() < kTtag1Magic.size() || std::memcmp(b.data(), kTtag1Magic.data(), kTtag1Magic.size()) != 0) {
    throw DataError("ttag1: bad magic");
  }
  if (b.size() < kTtag1HeaderSize) throw DataError("ttag1: truncated header");
  if (b[5] != kTtag1Version) throw DataError("ttag1: unsupported version " + std::to_string(b[5]));
  EventStream s;
  s.duration_ps = load_le64(b.data() + 6);
  const std::size_t body = b.size() - kTtag1HeaderSize;
  if (body % kTtag1RecordSize != 0) throw DataError("ttag1: truncated record");
  const std::size_t n = body / kTtag1RecordSize;
  s.events.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* rec = b.data() + kTtag1HeaderSize + i * kTtag1RecordSize;
    const std::uint8_t code = rec[8];
    if (code > static_cast<std::uint8_t>(Channel::GateGen)) {
      throw DataError("ttag1 record " + std::to_string(i) + ": unknown channel code " + std::to_string(code));
    }
    const Event e{static_cast<Channel>(code), load_le64(rec)};
    if (!s.events.empty() && event_before(e, s.events.back())) {
      throw DataError("ttag1 record " + std::to_string(i) + ": timestamps not sorted");
    }
    if (e.t >= s.duration_ps) {
      throw DataError("ttag1 record " + std::to_string(i) + ": timestamp beyond the acquisition duration");
    }
    s.events.push_back(e);
  }
  return s;
}

}  // namespace

std::optional<TimetagFormat> timetag_format_from_string(std::string_view s) noexcept {
  if (s == "csv") return TimetagFormat::Csv;
  if (s == "ttag1") return TimetagFormat::Ttag1;
  return std::nullopt;
}

EventStream parse_timetag(std::span<const std::uint8_t> bytes, TimetagFormat format) {
  if (format == TimetagFormat::Ttag1) return parse_ttag1(bytes);
  return parse_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

EventStream parse_timetag(std::string_view bytes, TimetagFormat format) {
  return parse_timetag(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()), format);
}

std::vector<std::uint8_t> write_timetag(const EventStream& s, TimetagFormat format) {
  std::vector<std::uint8_t> out;
  if (format == TimetagFormat::Ttag1) {
    out.reserve(kTtag1HeaderSize + kTtag1RecordSize * s.size());
    out.insert(out.end(), kTtag1Magic.begin(), kTtag1Magic.end());
    out.push_back(kTtag1Version);
    store_le64(out, s.duration_ps);
    for (const Event& e : s.events) {
      store_le64(out, e.t);
      out.push_back(static_cast<std::uint8_t>(e.channel));
    }
    return out;
  }
  std::string text = "# duration_ps=" + std::to_string(s.duration_ps) + "\nchannel,t_ps\n";
  for (const Event& e : s.events) {
    text += to_string(e.channel);
    text += ',';
    text += std::to_string(e.t);
    text += '\n';
  }
  return {text.begin(), text.end()};
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace coincsim
