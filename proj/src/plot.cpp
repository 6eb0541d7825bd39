#include "paraloq/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "paraloq/error.hpp"

namespace paraloq {

namespace {

constexpr int kGutter = 10;
constexpr int kPlotCols = kAsciiWidth - kGutter;
constexpr int kPlotRows = kAsciiHeight - 3;

constexpr double kSvgWidth = 800.0;
constexpr double kSvgHeight = 400.0;
constexpr double kSvgMargin = 60.0;

std::string pad(std::string s, std::size_t width) {
  s.resize(width, ' ');
  return s;
}

std::string num(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

void require_points(const Series& s) {
  if (s.values.empty()) fail(ErrorKind::kEmptyInput, "column '" + s.name + "' has no values");
}

}  // namespace

const std::vector<std::string>& plottable_columns() {
  static const std::vector<std::string> cols = {"t_s",      "dry_code",   "dry_temp_c",
                                                "wet_code", "wet_temp_c", "rh_pct",
                                                "dew_point_c"};
  return cols;
}

Series extract_column(const RunLog& log, std::string_view column) {
  const auto& cols = plottable_columns();
  if (std::find(cols.begin(), cols.end(), column) == cols.end()) {
    fail(ErrorKind::kInvalidInput, "unknown or non-numeric column '" + std::string(column) + "'");
  }
  Series s;
  s.name = std::string(column);
  for (const auto& row : log.rows) {
    std::optional<double> v;
    if (column == "t_s") v = row.t_s;
    else if (column == "dry_code") v = row.dry_code;
    else if (column == "dry_temp_c") v = row.dry_temp_c;
    else if (column == "wet_code") v = row.wet_code;
    else if (column == "wet_temp_c") v = row.wet_temp_c;
    else if (column == "rh_pct") v = row.rh_pct;
    else v = row.dew_point_c;
    if (v) {
      s.t_s.push_back(row.t_s);
      s.values.push_back(*v);
    }
  }
  return s;
}

std::string render_ascii(const Series& series) {
  require_points(series);
  const auto [lo_it, hi_it] = std::minmax_element(series.values.begin(), series.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const std::size_t n = series.values.size();

  std::vector<std::string> grid(kPlotRows, std::string(kPlotCols, ' '));
  for (std::size_t i = 0; i < n; ++i) {
    const int col = n == 1 ? 0
                           : static_cast<int>(std::lround(static_cast<double>(i) * (kPlotCols - 1) /
                                                          static_cast<double>(n - 1)));
    int row = kPlotRows / 2;
    if (hi > lo) {
      const double frac = (series.values[i] - lo) / (hi - lo);
      row = kPlotRows - 1 - static_cast<int>(std::lround(frac * (kPlotRows - 1)));
    }
    grid[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = '*';
  }

  std::string out;
  out.reserve(static_cast<std::size_t>((kAsciiWidth + 1) * kAsciiHeight));
  out += pad(series.name + " (" + std::to_string(n) + " points)", kAsciiWidth) + '\n';
  for (int r = 0; r < kPlotRows; ++r) {
    std::string gutter(kGutter - 1, ' ');
    if (r == 0) gutter = num("%9.3f", hi);
    if (r == kPlotRows - 1) gutter = num("%9.3f", lo);
    out += pad(pad(gutter, kGutter - 1) + "|" + grid[static_cast<std::size_t>(r)], kAsciiWidth);
    out += '\n';
  }
  out += pad(std::string(kGutter - 1, ' ') + "+" + std::string(kPlotCols, '-'), kAsciiWidth);
  out += '\n';
  const std::string left = "t=" + num("%.3f", series.t_s.front()) + "s";
  const std::string right = "t=" + num("%.3f", series.t_s.back()) + "s";
  std::string axis = std::string(kGutter, ' ') + left;
  const std::size_t right_at = kAsciiWidth - right.size();
  axis = pad(axis, right_at) + right;
  out += pad(axis, kAsciiWidth) + '\n';
  return out;
}

std::string render_svg(const Series& series) {
  require_points(series);
  const auto [lo_it, hi_it] = std::minmax_element(series.values.begin(), series.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double t0 = series.t_s.front();
  const double t1 = series.t_s.back();
  const double plot_w = kSvgWidth - 2 * kSvgMargin;
  const double plot_h = kSvgHeight - 2 * kSvgMargin;

  auto x_of = [&](double t) {
    return t1 > t0 ? kSvgMargin + (t - t0) / (t1 - t0) * plot_w : kSvgMargin;
  };
  auto y_of = [&](double v) {
    return hi > lo ? kSvgMargin + (hi - v) / (hi - lo) * plot_h : kSvgMargin + plot_h / 2;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" "
         "viewBox=\"0 0 800 400\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"400\" fill=\"white\"/>\n";
  out += "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"monospace\" "
         "font-size=\"16\">" + series.name + "</text>\n";
  out += "<line class=\"axis\" x1=\"60\" y1=\"340\" x2=\"740\" y2=\"340\" stroke=\"black\"/>\n";
  out += "<line class=\"axis\" x1=\"60\" y1=\"60\" x2=\"60\" y2=\"340\" stroke=\"black\"/>\n";
  out += "<text x=\"55\" y=\"64\" text-anchor=\"end\" font-family=\"monospace\" "
         "font-size=\"11\">" + num("%.3f", hi) + "</text>\n";
  out += "<text x=\"55\" y=\"344\" text-anchor=\"end\" font-family=\"monospace\" "
         "font-size=\"11\">" + num("%.3f", lo) + "</text>\n";
  out += "<text x=\"60\" y=\"360\" font-family=\"monospace\" font-size=\"11\">" +
         num("%.3f", t0) + " s</text>\n";
  out += "<text x=\"740\" y=\"360\" text-anchor=\"end\" font-family=\"monospace\" "
         "font-size=\"11\">" + num("%.3f", t1) + " s</text>\n";
  out += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    if (i > 0) out += ' ';
    out += num("%.2f", x_of(series.t_s[i])) + "," + num("%.2f", y_of(series.values[i]));
  }
  out += "\"/>\n</svg>\n";
  return out;
}

}  // namespace paraloq
