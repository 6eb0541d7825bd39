#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "paraloq/logstore.hpp"

namespace paraloq {

struct Series {
  std::string name;
  std::vector<double> t_s;
  std::vector<double> values;
};

inline constexpr int kAsciiWidth = 80;
inline constexpr int kAsciiHeight = 24;

const std::vector<std::string>& plottable_columns();

// Numeric column of a run log; rows with an empty field are skipped.
// Throws kInvalidInput for an unknown or non-numeric column.
Series extract_column(const RunLog& log, std::string_view column);

// Fixed 80x24 chart: title line, 21 plot rows with max/min labels, axis
// line and time labels. Throws kEmptyInput for an empty series.
std::string render_ascii(const Series& series);

std::string render_svg(const Series& series);

}  // namespace paraloq
