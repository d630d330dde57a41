#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coincsim/event.hpp"

namespace coincsim {

enum class TimetagFormat : std::uint8_t { Csv, Ttag1 };

std::optional<TimetagFormat> timetag_format_from_string(std::string_view s) noexcept;

/// TTAG1 layout (all integers little-endian):
///   "TTAG1" | u8 version (=1) | u64 duration_ps | { u64 t_ps, u8 channel }*
/// Channel codes: 0 = T, 1 = D1, 2 = D2, 3 = G.
inline constexpr std::string_view kTtag1Magic{"TTAG1"};
inline constexpr std::uint8_t kTtag1Version = 1;
inline constexpr std::size_t kTtag1HeaderSize = 5 + 1 + 8;
inline constexpr std::size_t kTtag1RecordSize = 8 + 1;

/// CSV layout: an optional "# duration_ps=<n>" line, the header
/// "channel,t_ps", then one "<T|D1|D2|G>,<t_ps>" row per event. Without the
/// duration line the duration is taken as last t + 1.
///
/// Parsing never sorts: unsorted input, unknown channels, malformed or
/// truncated records and out-of-range timestamps throw DataError.
EventStream parse_timetag(std::span<const std::uint8_t> bytes, TimetagFormat format);
EventStream parse_timetag(std::string_view bytes, TimetagFormat format);

/// Deterministic serialization; TTAG1 output is exactly
/// kTtag1HeaderSize + kTtag1RecordSize * events bytes.
std::vector<std::uint8_t> write_timetag(const EventStream& s, TimetagFormat format);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace coincsim
