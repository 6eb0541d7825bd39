#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "paraloq/psychro.hpp"

// Spreadsheet-compatible run logs.
//
//   # paraloq run log
//   # run_id=<id>
//   # start=<ISO-8601 UTC, ms>
//   # sample_rate_hz=<%.17g>
//   # channel_map=<text>
//   # config_fingerprint=<text>
//   t_s,timestamp,dry_code,dry_temp_c,wet_code,wet_temp_c,rh_pct,dew_point_c
//   0.000000,2026-10-19T08:30:00.000Z,102,20.000000,92,18.039216,82.872516,16.998432
//
// UTF-8, CRLF line endings, floats with six decimals, rh/dew left empty when
// the psychrometer computation failed for that row.

namespace paraloq {

inline constexpr const char* kCsvHeader =
    "t_s,timestamp,dry_code,dry_temp_c,wet_code,wet_temp_c,rh_pct,dew_point_c";
inline constexpr int kCsvColumns = 8;

struct RunMeta {
  std::string run_id = "sim";
  std::int64_t start_epoch_ms = 0;
  double sample_rate_hz = 2.0;
  std::string channel_map = "dry=IN0;wet=IN1";
  std::string config_fingerprint;

  bool operator==(const RunMeta&) const = default;
};

struct PsychroRow {
  double t_s = 0.0;
  std::string timestamp;
  std::uint8_t dry_code = 0;
  double dry_temp_c = 0.0;
  std::uint8_t wet_code = 0;
  double wet_temp_c = 0.0;
  std::optional<double> rh_pct;
  std::optional<double> dew_point_c;

  bool operator==(const PsychroRow&) const = default;
};

struct RunLog {
  RunMeta meta;
  std::vector<PsychroRow> rows;

  bool operator==(const RunLog&) const = default;
};

// Value as it reads back from the file: nearest double to round(x, 6).
double round6(double x);

// Builds a row at file resolution from two codes taken at t_s. rh/dew are
// computed from the decoded temperatures; a psychrometer error leaves them
// empty.
PsychroRow make_row(double t_s, std::int64_t start_epoch_ms, std::uint8_t dry_code,
                    std::uint8_t wet_code, const PsychroConfig& psychro = {});

// Checks row invariants (temps match codes, t_s strictly increasing, rh/dew
// both set or both empty). Throws kInvalidInput.
void validate_run_log(const RunLog& log);

// run_<ISO-8601-basic>_<id>.csv
std::string default_log_filename(const RunMeta& meta);

std::string format_row(const PsychroRow& row);
void write_csv(const RunLog& log, std::ostream& out);
// Throws kStorage with the path on I/O failure.
void write_csv(const RunLog& log, const std::filesystem::path& path);

// Throws kParse naming the offending line.
RunLog read_csv(std::istream& in, const std::string& source = "<stream>");
RunLog read_csv(const std::filesystem::path& path);

// Append-only writer; every row is flushed as soon as it is written.
class CsvLogWriter {
 public:
  CsvLogWriter(const std::filesystem::path& path, const RunMeta& meta);

  void append(const PsychroRow& row);
  void close();
  std::size_t rows_written() const { return rows_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  void check(const char* what);

  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t rows_ = 0;
  std::optional<double> last_t_;
};

}  // namespace paraloq
