#include "paraloq/logstore.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "paraloq/adc0808.hpp"
#include "paraloq/error.hpp"
#include "paraloq/timestamp.hpp"

namespace paraloq {

namespace {

constexpr double kTempMatchTol = 1e-6;
constexpr const char* kEol = "\r\n";

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string optional6(const std::optional<double>& x) { return x ? fixed6(*x) : std::string(); }

bool plain_text(std::string_view s) {
  for (char c : s) {
    if (c == '\r' || c == '\n' || c == ',') return false;
  }
  return true;
}

void validate_meta(const RunMeta& meta) {
  if (meta.run_id.empty()) fail(ErrorKind::kInvalidInput, "run id must not be empty");
  for (char c : meta.run_id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_';
    if (!ok) fail(ErrorKind::kInvalidInput, "run id may only contain [A-Za-z0-9_-]");
  }
  if (!plain_text(meta.channel_map) || !plain_text(meta.config_fingerprint)) {
    fail(ErrorKind::kInvalidInput, "metadata values must not contain commas or line breaks");
  }
  if (!(meta.sample_rate_hz > 0.0) || !std::isfinite(meta.sample_rate_hz)) {
    fail(ErrorKind::kInvalidInput, "sample rate must be > 0");
  }
}

void write_meta(std::ostream& out, const RunMeta& meta) {
  char rate[64];
  std::snprintf(rate, sizeof rate, "%.17g", meta.sample_rate_hz);
  out << "# paraloq run log" << kEol;
  out << "# run_id=" << meta.run_id << kEol;
  out << "# start=" << format_iso8601_ms(meta.start_epoch_ms) << kEol;
  out << "# sample_rate_hz=" << rate << kEol;
  out << "# channel_map=" << meta.channel_map << kEol;
  out << "# config_fingerprint=" << meta.config_fingerprint << kEol;
  out << kCsvHeader << kEol;
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& msg) {
  fail(ErrorKind::kParse, source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(std::string_view field, const std::string& source, std::size_t line,
                    const char* column) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    parse_fail(source, line, std::string("bad number '") + std::string(field) + "' in " + column);
  }
  return v;
}

std::uint8_t parse_code(std::string_view field, const std::string& source, std::size_t line,
                        const char* column) {
  int v = -1;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end || v < 0 || v > AdcConfig::kMaxCode) {
    parse_fail(source, line, std::string("bad code '") + std::string(field) + "' in " + column);
  }
  return static_cast<std::uint8_t>(v);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void check_row(const PsychroRow& row, const std::optional<double>& prev_t) {
  if (!std::isfinite(row.t_s)) fail(ErrorKind::kInvalidInput, "t_s must be finite");
  if (prev_t && !(row.t_s > *prev_t)) {
    fail(ErrorKind::kInvalidInput, "t_s must be strictly increasing");
  }
  if (std::abs(row.dry_temp_c - decode_temp(row.dry_code)) > kTempMatchTol ||
      std::abs(row.wet_temp_c - decode_temp(row.wet_code)) > kTempMatchTol) {
    fail(ErrorKind::kInvalidInput, "temperature column does not match its code");
  }
  if (row.rh_pct.has_value() != row.dew_point_c.has_value()) {
    fail(ErrorKind::kInvalidInput, "rh_pct and dew_point_c must be both set or both empty");
  }
  if (!plain_text(row.timestamp)) fail(ErrorKind::kInvalidInput, "bad timestamp text");
}

}  // namespace

double round6(double x) { return std::strtod(fixed6(x).c_str(), nullptr); }

PsychroRow make_row(double t_s, std::int64_t start_epoch_ms, std::uint8_t dry_code,
                    std::uint8_t wet_code, const PsychroConfig& psychro) {
  PsychroRow row;
  row.t_s = round6(t_s);
  row.timestamp = format_iso8601_ms(start_epoch_ms + std::llround(t_s * 1000.0));
  row.dry_code = dry_code;
  row.wet_code = wet_code;
  const double dry = decode_temp(dry_code);
  const double wet = decode_temp(wet_code);
  row.dry_temp_c = round6(dry);
  row.wet_temp_c = round6(wet);
  try {
    const PsychroReading r = psychro_reading(dry, wet, psychro);
    row.rh_pct = round6(r.rh_pct);
    row.dew_point_c = round6(r.dew_point_c);
  } catch (const Error&) {
    row.rh_pct.reset();
    row.dew_point_c.reset();
  }
  return row;
}

void validate_run_log(const RunLog& log) {
  validate_meta(log.meta);
  std::optional<double> prev;
  for (const auto& row : log.rows) {
    check_row(row, prev);
    prev = row.t_s;
  }
}

std::string default_log_filename(const RunMeta& meta) {
  return "run_" + format_iso8601_basic(meta.start_epoch_ms) + "_" + meta.run_id + ".csv";
}

std::string format_row(const PsychroRow& row) {
  std::string out;
  out.reserve(96);
  out += fixed6(row.t_s);
  out += ',';
  out += row.timestamp;
  out += ',';
  out += std::to_string(row.dry_code);
  out += ',';
  out += fixed6(row.dry_temp_c);
  out += ',';
  out += std::to_string(row.wet_code);
  out += ',';
  out += fixed6(row.wet_temp_c);
  out += ',';
  out += optional6(row.rh_pct);
  out += ',';
  out += optional6(row.dew_point_c);
  return out;
}

void write_csv(const RunLog& log, std::ostream& out) {
  validate_run_log(log);
  write_meta(out, log.meta);
  for (const auto& row : log.rows) out << format_row(row) << kEol;
}

void write_csv(const RunLog& log, const std::filesystem::path& path) {
  validate_run_log(log);
  CsvLogWriter writer(path, log.meta);
  for (const auto& row : log.rows) writer.append(row);
  writer.close();
}

RunLog read_csv(std::istream& in, const std::string& source) {
  RunLog log;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::optional<double> prev_t;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    if (line.front() == '#') {
      if (header_seen) parse_fail(source, line_no, "metadata line after the header");
      line.remove_prefix(1);
      if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) continue;  // free-form comment
      const std::string_view key = line.substr(0, eq);
      const std::string value(line.substr(eq + 1));
      if (key == "run_id") {
        log.meta.run_id = value;
      } else if (key == "start") {
        try {
          log.meta.start_epoch_ms = parse_iso8601_ms(value);
        } catch (const Error& e) {
          parse_fail(source, line_no, e.what());
        }
      } else if (key == "sample_rate_hz") {
        log.meta.sample_rate_hz = parse_double(value, source, line_no, "sample_rate_hz");
      } else if (key == "channel_map") {
        log.meta.channel_map = value;
      } else if (key == "config_fingerprint") {
        log.meta.config_fingerprint = value;
      }
      continue;
    }

    const auto fields = split(line);
    if (!header_seen) {
      const auto expected = split(kCsvHeader);
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i >= expected.size() || fields[i] != expected[i]) {
          parse_fail(source, line_no, "unknown column '" + std::string(fields[i]) + "'");
        }
      }
      if (fields.size() != expected.size()) {
        parse_fail(source, line_no,
                   "header has " + std::to_string(fields.size()) + " columns, expected " +
                       std::to_string(expected.size()));
      }
      header_seen = true;
      continue;
    }

    if (fields.size() != static_cast<std::size_t>(kCsvColumns)) {
      parse_fail(source, line_no,
                 "expected " + std::to_string(kCsvColumns) + " fields, got " +
                     std::to_string(fields.size()));
    }
    PsychroRow row;
    row.t_s = parse_double(fields[0], source, line_no, "t_s");
    row.timestamp = std::string(fields[1]);
    try {
      parse_iso8601_ms(row.timestamp);
    } catch (const Error& e) {
      parse_fail(source, line_no, e.what());
    }
    row.dry_code = parse_code(fields[2], source, line_no, "dry_code");
    row.dry_temp_c = parse_double(fields[3], source, line_no, "dry_temp_c");
    row.wet_code = parse_code(fields[4], source, line_no, "wet_code");
    row.wet_temp_c = parse_double(fields[5], source, line_no, "wet_temp_c");
    if (!fields[6].empty()) row.rh_pct = parse_double(fields[6], source, line_no, "rh_pct");
    if (!fields[7].empty()) {
      row.dew_point_c = parse_double(fields[7], source, line_no, "dew_point_c");
    }
    try {
      check_row(row, prev_t);
    } catch (const Error& e) {
      parse_fail(source, line_no, e.what());
    }
    prev_t = row.t_s;
    log.rows.push_back(std::move(row));
  }
  if (!header_seen) parse_fail(source, line_no, "missing header line");
  try {
    validate_meta(log.meta);
  } catch (const Error& e) {
    parse_fail(source, 0, e.what());
  }
  return log;
}

RunLog read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kStorage, path.string() + ": cannot open for reading");
  return read_csv(in, path.string());
}

CsvLogWriter::CsvLogWriter(const std::filesystem::path& path, const RunMeta& meta)
    : path_(path) {
  validate_meta(meta);
  out_.open(path, std::ios::binary | std::ios::trunc);
  check("open");
  write_meta(out_, meta);
  out_.flush();
  check("write header");
}

void CsvLogWriter::append(const PsychroRow& row) {
  check_row(row, last_t_);
  out_ << format_row(row) << kEol;
  out_.flush();
  check("write row");
  last_t_ = row.t_s;
  ++rows_;
}

void CsvLogWriter::close() {
  if (out_.is_open()) {
    out_.close();
    check("close");
  }
}

void CsvLogWriter::check(const char* what) {
  if (!out_) {
    fail(ErrorKind::kStorage, path_.string() + ": " + what + " failed");
  }
}

}  // namespace paraloq
