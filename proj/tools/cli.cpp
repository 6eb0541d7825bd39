#include "paraloq/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "paraloq/acquisition.hpp"
#include "paraloq/adc0808.hpp"
#include "paraloq/config.hpp"
#include "paraloq/error.hpp"
#include "paraloq/logstore.hpp"
#include "paraloq/plot.hpp"
#include "paraloq/psychro.hpp"
#include "paraloq/timestamp.hpp"

namespace paraloq::cli {

namespace {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDeviceTimeout: return kDeviceTimeout;
    case ErrorKind::kStorage: return kStorageError;
    case ErrorKind::kParse:
    case ErrorKind::kEmptyInput: return kParseError;
    default: return kInvalidArgs;
  }
}

std::string f6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void print_summary(std::ostream& out, const RunSummary& s) {
  out << "Dry Temp " << f6(s.dry.mean_c) << " min=" << f6(s.dry.min_c)
      << " max=" << f6(s.dry.max_c) << "\n";
  out << "Wet Temp " << f6(s.wet.mean_c) << " min=" << f6(s.wet.min_c)
      << " max=" << f6(s.wet.max_c) << "\n";
  out << "Rel. Humidity " << (s.mean_rh_pct ? f6(*s.mean_rh_pct) : std::string("n/a")) << "\n";
  out << "Dew Point " << (s.mean_dew_point_c ? f6(*s.mean_dew_point_c) : std::string("n/a"))
      << "\n";
}

struct SimulateFlags {
  double rate = 2.0;
  double duration = 0.0;
  double dry_temp = 20.0;
  double wet_temp = 20.0;
  std::string dry_stimulus;
  std::string wet_stimulus;
  std::string stimulus;
  std::string out;
  std::string config;
  std::string start;
  std::string run_id;
  std::uint64_t seed = 0;
  double noise_lsb = 0.0;
  bool realtime = false;
};

struct ComputeFlags {
  double dry = 0.0;
  double wet = 0.0;
  double pressure = PsychroConfig{}.pressure_hpa;
};

struct PlotFlags {
  std::string input;
  std::string column;
  std::string format = "ascii";
  std::string out = "-";
};

struct ConvertFlags {
  double volts = 0.0;
  int channel = 0;
  double clock_hz = 640e3;
  std::string trace;
};

int cmd_simulate(const SimulateFlags& f, const CLI::App& app, std::ostream& out,
                 std::ostream& err) {
  auto given = [&](const char* name) { return app.count(name) > 0; };

  // Validate everything before any file is created.
  RunConfig cfg;
  std::string config_path = f.config;
  if (config_path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar)) config_path = env;
  }
  if (!config_path.empty()) apply_config(load_config(config_path), cfg);

  if (given("--rate")) {
    if (!(f.rate > 0.0)) {
      err << "error: --rate must be > 0 (got " << f.rate << ")\n";
      return kInvalidArgs;
    }
    cfg.sample_rate_hz = f.rate;
  }
  if (given("--duration")) {
    if (!(f.duration >= 0.0)) {
      err << "error: --duration must be >= 0 (got " << f.duration << ")\n";
      return kInvalidArgs;
    }
    cfg.duration_s = f.duration;
  }
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--noise-lsb")) cfg.adc.noise_sigma_lsb = f.noise_lsb;

  auto set_stimulus = [&](Channel ch, const Stimulus& s) {
    for (auto& setup : cfg.channels) {
      if (setup.channel == ch) setup.stimulus = s;
    }
  };
  if (given("--stimulus")) {
    set_stimulus(Channel::kDry, parse_stimulus(f.stimulus, Channel::kDry));
    set_stimulus(Channel::kWet, parse_stimulus(f.stimulus, Channel::kWet));
  }
  if (given("--dry-temp")) set_stimulus(Channel::kDry, ConstantStimulus{f.dry_temp});
  if (given("--wet-temp")) set_stimulus(Channel::kWet, ConstantStimulus{f.wet_temp});
  if (given("--dry-stimulus")) {
    set_stimulus(Channel::kDry, parse_stimulus(f.dry_stimulus, Channel::kDry));
  }
  if (given("--wet-stimulus")) {
    set_stimulus(Channel::kWet, parse_stimulus(f.wet_stimulus, Channel::kWet));
  }

  cfg.start_epoch_ms = given("--start") ? parse_iso8601_ms(f.start) : now_epoch_ms();
  if (given("--run-id")) {
    cfg.run_id = f.run_id;
  } else if (cfg.run_id == RunConfig{}.run_id) {
    cfg.run_id = cfg.fingerprint().substr(cfg.fingerprint().size() - 8);
  }
  cfg.validate();

  RunMeta meta{cfg.run_id, cfg.start_epoch_ms, cfg.sample_rate_hz, cfg.channel_map(),
               cfg.fingerprint()};
  const std::string path = f.out.empty() ? default_log_filename(meta) : f.out;

  for (const auto& w : cfg.warnings()) err << "warning: " << w << "\n";

  CsvLogSink sink(path, cfg);
  SampleSink* sinks[] = {&sink};
  RunOptions options;
  options.scheduling = f.realtime ? Scheduling::kWallClock : Scheduling::kSimulated;
  const RunOutcome result = run_acquisition(cfg, sinks, options);

  out << "wrote " << path << " (" << sink.rows_written() << " rows)\n";
  if (result.dropped > 0) err << "warning: " << result.dropped << " samples dropped by sinks\n";
  if (!result.log.rows.empty()) print_summary(out, summarize(result.log));
  if (result.error) {
    err << "error: " << result.error->what() << "\n";
    return exit_code_for(result.error->kind());
  }
  return kOk;
}

int cmd_compute(const ComputeFlags& f, std::ostream& out) {
  PsychroConfig cfg;
  cfg.pressure_hpa = f.pressure;
  cfg.validate();
  const PsychroReading r = psychro_reading(f.dry, f.wet, cfg);
  out << "rh_pct=" << f6(r.rh_pct) << ", dew_point_c=" << f6(r.dew_point_c) << "\n";
  return kOk;
}

int cmd_plot(const PlotFlags& f, std::ostream& out) {
  if (f.format != "ascii" && f.format != "svg") {
    fail(ErrorKind::kInvalidInput, "--format must be ascii or svg");
  }
  const auto& cols = plottable_columns();
  if (std::find(cols.begin(), cols.end(), f.column) == cols.end()) {
    fail(ErrorKind::kInvalidInput, "--column '" + f.column + "' is not a numeric log column");
  }
  const RunLog log = read_csv(std::filesystem::path(f.input));
  const Series series = extract_column(log, f.column);
  const std::string body = f.format == "svg" ? render_svg(series) : render_ascii(series);
  if (f.out == "-") {
    out << body;
    return kOk;
  }
  std::ofstream file(f.out, std::ios::binary | std::ios::trunc);
  file << body;
  file.close();
  if (!file) fail(ErrorKind::kStorage, f.out + ": write failed");
  return kOk;
}

int cmd_summarize(const std::string& input, std::ostream& out) {
  print_summary(out, summarize(read_csv(std::filesystem::path(input))));
  return kOk;
}

int cmd_convert(const ConvertFlags& f, std::ostream& out) {
  AdcConfig adc;
  SarSteps steps{};
  const AdcCode code = sar_convert(f.volts, f.channel, f.clock_hz, adc, steps);
  out << "code=" << static_cast<int>(code.code) << ", latency_us=" << f6(code.latency_s * 1e6)
      << ", temp_c=" << f6(decode_temp(code.code)) << "\n";
  if (!f.trace.empty()) {
    std::ofstream file(f.trace, std::ios::trunc);
    write_sar_trace(file, steps);
    file.close();
    if (!file) fail(ErrorKind::kStorage, f.trace + ": write failed");
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"paraloq - simulated parallel-port temperature and humidity logger"};
  app.name("paraloq");
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Run a simulated acquisition and log it to CSV");
  simulate->add_option("--rate", sim.rate, "Sample rate in S/s (default 2)");
  simulate->add_option("--duration", sim.duration, "Run length in seconds (default 0)");
  auto* dry_temp = simulate->add_option("--dry-temp", sim.dry_temp, "Constant dry-bulb degC");
  auto* wet_temp = simulate->add_option("--wet-temp", sim.wet_temp, "Constant wet-bulb degC");
  simulate->add_option("--dry-stimulus", sim.dry_stimulus, "Dry stimulus spec")->excludes(dry_temp);
  simulate->add_option("--wet-stimulus", sim.wet_stimulus, "Wet stimulus spec")->excludes(wet_temp);
  simulate->add_option("--stimulus", sim.stimulus,
                       "Stimulus for both channels: const:C | sine:AMP:HZ:OFFSET | replay:PATH");
  simulate->add_option("--out", sim.out, "Output CSV (default run_<time>_<id>.csv)");
  simulate->add_option("--seed", sim.seed, "Seed for converter noise");
  simulate->add_option("--noise-lsb", sim.noise_lsb, "Gaussian converter noise sigma in LSB");
  simulate->add_option("--config", sim.config, "Settings file (default $PARALOQ_CONFIG)");
  simulate->add_option("--start", sim.start, "Run start, e.g. 2026-10-19T08:30:00.000Z");
  simulate->add_option("--run-id", sim.run_id, "Run identifier");
  simulate->add_flag("--realtime", sim.realtime, "Pace ticks by the wall clock");

  ComputeFlags comp;
  auto* compute = app.add_subcommand("compute", "Relative humidity and dew point of one reading");
  compute->add_option("--dry", comp.dry, "Dry-bulb degC")->required();
  compute->add_option("--wet", comp.wet, "Wet-bulb degC")->required();
  compute->add_option("--pressure", comp.pressure, "Station pressure in hPa");

  PlotFlags plot;
  auto* plot_cmd = app.add_subcommand("plot", "Render one log column as ASCII or SVG");
  plot_cmd->add_option("--input", plot.input, "Run log CSV")->required();
  plot_cmd->add_option("--column", plot.column, "Column to plot")->required();
  plot_cmd->add_option("--format", plot.format, "ascii or svg");
  plot_cmd->add_option("--out", plot.out, "Output path or - for stdout");

  std::string summarize_input;
  auto* summarize_cmd = app.add_subcommand("summarize", "Per-channel means, ranges, humidity and dew point of a run log");
  summarize_cmd->add_option("--input", summarize_input, "Run log CSV")->required();

  ConvertFlags conv;
  auto* convert = app.add_subcommand("convert", "One SAR conversion with optional step trace");
  convert->add_option("--volts", conv.volts, "Converter input in volts")->required();
  convert->add_option("--channel", conv.channel, "Mux input 0..7");
  convert->add_option("--clock-hz", conv.clock_hz, "Converter clock in Hz");
  convert->add_option("--trace", conv.trace, "Write the SAR step trace to this file");

  std::vector<const char*> argv;
  argv.push_back("paraloq");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidArgs;
  }

  try {
    if (*simulate) return cmd_simulate(sim, *simulate, out, err);
    if (*compute) return cmd_compute(comp, out);
    if (*plot_cmd) return cmd_plot(plot, out);
    if (*summarize_cmd) return cmd_summarize(summarize_input, out);
    if (*convert) return cmd_convert(conv, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return kInvalidArgs;
}

}  // namespace paraloq::cli
