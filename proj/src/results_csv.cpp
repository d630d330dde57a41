#include "coincsim/results_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "coincsim/error.hpp"

namespace coincsim {

namespace {

std::string g6(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void row(std::string& out, const std::string& point, double rate, const CountSummary& c,
         const std::optional<AlphaEstimate>& e) {
  out += point;
  out += ',' + g6(rate);
  out += ',' + std::to_string(c.N);
  out += ',' + std::to_string(c.N1);
  out += ',' + std::to_string(c.N2);
  out += ',' + std::to_string(c.Nc);
  out += ',' + (e ? g6(e->alpha) : std::string("nan"));
  out += ',' + (e ? g6(e->sigma) : std::string("nan"));
  out += '\n';
}

double to_real(std::string_view s, std::size_t line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError("results csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t to_count(std::string_view s, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError("results csv line " + std::to_string(line) + ": bad count '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string emit_results_csv(const ScenarioResult& r) {
  std::string out(kResultsCsvHeader);
  out += '\n';
  for (const PointResult& p : r.points) row(out, std::to_string(p.index), p.rate_cps, p.tally.counts, p.estimate);

  // Summary over the points that entered the weighted mean.
  double rate = std::numeric_limits<double>::quiet_NaN();
  CountSummary counts;
  if (r.overall) {
    counts = r.overall->counts;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < r.overall_points && i < r.points.size(); ++i) {
      if (!r.points[i].estimate) continue;
      sum += r.points[i].rate_cps;
      ++n;
    }
    if (n) rate = sum / static_cast<double>(n);
  }
  row(out, "overall", rate, counts, r.overall);
  return out;
}

std::vector<ResultsRow> parse_results_csv(std::string_view text) {
  std::vector<ResultsRow> rows;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kResultsCsvHeader) throw DataError("results csv: unexpected header");
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t p = 0;
    while (true) {
      const auto c = line.find(',', p);
      f.push_back(line.substr(p, c == std::string_view::npos ? std::string_view::npos : c - p));
      if (c == std::string_view::npos) break;
      p = c + 1;
    }
    if (f.size() != 8) throw DataError("results csv line " + std::to_string(line_no) + ": expected 8 columns");
    ResultsRow r;
    r.point = std::string(f[0]);
    r.rate_cps = to_real(f[1], line_no);
    r.counts = {to_count(f[2], line_no), to_count(f[3], line_no), to_count(f[4], line_no), to_count(f[5], line_no)};
    r.alpha = to_real(f[6], line_no);
    r.sigma = to_real(f[7], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace coincsim
