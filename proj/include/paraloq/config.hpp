#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "paraloq/acquisition.hpp"

// `key = value` settings file with `[section]` headers:
//
//   [run]      sample_rate_hz duration_s seed filter_step_s run_id fifo_capacity
//   [chain]    sensor_slope amp_gain clamp_volts filter_cutoff_hz vref
//   [clock]    r_ohms c_farads
//   [adc]      vref conversion_cycles unadjusted_error_lsb noise_sigma_lsb
//   [psychro]  psychrometer_coeff pressure_hpa magnus_a magnus_b magnus_c
//   [port]     poll_fraction timeout_factor start_ale output_enable eoc
//   [stimulus] dry wet
//
// `#` and `;` start comment lines. Unknown sections or keys are errors.

namespace paraloq {

inline constexpr const char* kConfigEnvVar = "PARALOQ_CONFIG";

struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct ConfigFile {
  std::string source;
  std::vector<ConfigEntry> entries;
};

// Throws kInvalidInput naming source and line.
ConfigFile parse_config(std::istream& in, const std::string& source = "<config>");
ConfigFile load_config(const std::filesystem::path& path);

// Applies every entry over the given settings; chain keys apply to all
// channels. Throws kInvalidInput for unknown keys or bad values.
void apply_config(const ConfigFile& file, RunConfig& run);

}  // namespace paraloq
