#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coincsim/scenario.hpp"

namespace coincsim {

inline constexpr std::string_view kResultsCsvHeader{"point,rate_cps,N,N1,N2,Nc,alpha,sigma"};

/// Header, one row per point, then an "overall" row with the weighted mean.
/// Reals use %.6g; undefined estimates print as "nan".
std::string emit_results_csv(const ScenarioResult& r);

struct ResultsRow {
  std::string point;  ///< point index or "overall"
  double rate_cps{0.0};
  CountSummary counts;
  double alpha{0.0};
  double sigma{0.0};
};

/// Reads back emit_results_csv output. Throws DataError on malformed rows.
std::vector<ResultsRow> parse_results_csv(std::string_view text);

}  // namespace coincsim
