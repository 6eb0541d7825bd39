#include "paraloq/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "paraloq/error.hpp"

namespace paraloq {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad(const std::string& source, std::size_t line, const std::string& msg) {
  fail(ErrorKind::kInvalidInput, source + ":" + std::to_string(line) + ": " + msg);
}

struct EntryReader {
  const ConfigFile& file;
  const ConfigEntry& e;

  double real() const {
    double v = 0.0;
    const auto* end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (e.value.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
      bad(file.source, e.line, e.section + "." + e.key + ": '" + e.value + "' is not a number");
    }
    return v;
  }

  long long integer() const {
    long long v = 0;
    const auto* end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (e.value.empty() || ec != std::errc() || ptr != end) {
      bad(file.source, e.line, e.section + "." + e.key + ": '" + e.value + "' is not an integer");
    }
    return v;
  }
};

}  // namespace

ConfigFile parse_config(std::istream& in, const std::string& source) {
  ConfigFile file;
  file.source = source;
  std::string raw;
  std::string section;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text.front() == '#' || text.front() == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') bad(source, line, "unterminated section header");
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      if (section.empty()) bad(source, line, "empty section name");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) bad(source, line, "expected 'key = value'");
    if (section.empty()) bad(source, line, "key outside any [section]");
    ConfigEntry e{section, trim(std::string_view(text).substr(0, eq)),
                  trim(std::string_view(text).substr(eq + 1)), line};
    if (e.key.empty()) bad(source, line, "empty key");
    file.entries.push_back(std::move(e));
  }
  return file;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kInvalidInput, path.string() + ": cannot open config file");
  return parse_config(in, path.string());
}

void apply_config(const ConfigFile& file, RunConfig& run) {
  for (const auto& e : file.entries) {
    const EntryReader r{file, e};
    const std::string& s = e.section;
    const std::string& k = e.key;
    bool known = true;
    if (s == "run") {
      if (k == "sample_rate_hz") run.sample_rate_hz = r.real();
      else if (k == "duration_s") run.duration_s = r.real();
      else if (k == "seed") run.seed = static_cast<std::uint64_t>(r.integer());
      else if (k == "filter_step_s") run.filter_step_s = r.real();
      else if (k == "run_id") run.run_id = e.value;
      else if (k == "fifo_capacity") run.fifo_capacity = static_cast<std::size_t>(r.integer());
      else known = false;
    } else if (s == "chain") {
      for (auto& ch : run.channels) {
        if (k == "sensor_slope") ch.chain.sensor_slope = r.real();
        else if (k == "amp_gain") ch.chain.amp_gain = r.real();
        else if (k == "clamp_volts") ch.chain.clamp_volts = r.real();
        else if (k == "filter_cutoff_hz") ch.chain.filter_cutoff_hz = r.real();
        else if (k == "vref") ch.chain.vref = r.real();
        else known = false;
      }
    } else if (s == "clock") {
      if (k == "r_ohms") run.clock.r_ohms = r.real();
      else if (k == "c_farads") run.clock.c_farads = r.real();
      else known = false;
    } else if (s == "adc") {
      if (k == "vref") run.adc.vref = r.real();
      else if (k == "conversion_cycles") run.adc.conversion_cycles = static_cast<int>(r.integer());
      else if (k == "unadjusted_error_lsb") run.adc.unadjusted_error_lsb = r.real();
      else if (k == "noise_sigma_lsb") run.adc.noise_sigma_lsb = r.real();
      else known = false;
    } else if (s == "psychro") {
      if (k == "psychrometer_coeff") run.psychro.psychrometer_coeff = r.real();
      else if (k == "pressure_hpa") run.psychro.pressure_hpa = r.real();
      else if (k == "magnus_a") run.psychro.magnus_a = r.real();
      else if (k == "magnus_b") run.psychro.magnus_b = r.real();
      else if (k == "magnus_c") run.psychro.magnus_c = r.real();
      else known = false;
    } else if (s == "port") {
      if (k == "poll_fraction") run.timing.poll_fraction = r.real();
      else if (k == "timeout_factor") run.timing.timeout_factor = r.real();
      else if (k == "start_ale") run.handshake.start_ale = static_cast<int>(r.integer());
      else if (k == "output_enable") run.handshake.output_enable = static_cast<int>(r.integer());
      else if (k == "eoc") run.handshake.eoc = static_cast<int>(r.integer());
      else known = false;
    } else if (s == "stimulus") {
      if (k == "dry" || k == "wet") {
        const Channel ch = k == "dry" ? Channel::kDry : Channel::kWet;
        for (auto& setup : run.channels) {
          if (setup.channel == ch) setup.stimulus = parse_stimulus(e.value, ch);
        }
      } else {
        known = false;
      }
    } else {
      bad(file.source, e.line, "unknown section [" + s + "]");
    }
    if (!known) bad(file.source, e.line, "unknown key '" + k + "' in [" + s + "]");
  }
}

}  // namespace paraloq
