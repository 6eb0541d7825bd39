#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "paraloq/adc0808.hpp"
#include "paraloq/error.hpp"
#include "paraloq/logstore.hpp"
#include "paraloq/pport.hpp"
#include "paraloq/psychro.hpp"
#include "paraloq/signal_chain.hpp"

namespace paraloq {

enum class Channel : int { kDry = 0, kWet = 1 };

std::string_view to_string(Channel ch);

struct Sample {
  std::uint64_t seq = 0;
  double t = 0.0;  // seconds since run start
  std::int64_t epoch_ms = 0;
  Channel channel = Channel::kDry;
  std::uint8_t code = 0;
  double volts = 0.0;
  double temp_c = 0.0;

  std::string timestamp() const;
};

struct ConstantStimulus {
  double temp_c = 20.0;
};

struct SineStimulus {
  double amplitude_c = 1.0;
  double freq_hz = 0.1;
  double offset_c = 25.0;
};

// Zero-order hold over a recorded temperature series.
struct ReplayStimulus {
  std::vector<double> t_s;
  std::vector<double> temp_c;
  std::string source;

  static ReplayStimulus from_log(const RunLog& log, Channel ch, std::string source = {});
};

using Stimulus = std::variant<ConstantStimulus, SineStimulus, ReplayStimulus>;

double stimulus_value(const Stimulus& s, double t);
// Highest frequency component, if the stimulus has a known one.
std::optional<double> stimulus_frequency(const Stimulus& s);

// "const:<degC>", "sine:<amplitude>:<freq_hz>:<offset>", "replay:<csv path>"
// (replay takes the column matching `ch`). Throws kInvalidInput / kParse.
Stimulus parse_stimulus(std::string_view spec, Channel ch);

struct ChannelSetup {
  Channel channel = Channel::kDry;
  int mux_input = 0;
  ChainConfig chain;
  Stimulus stimulus = ConstantStimulus{};
};

struct RunConfig {
  double sample_rate_hz = 2.0;
  double duration_s = 0.0;
  std::vector<ChannelSetup> channels = {
      {Channel::kDry, 0, {}, ConstantStimulus{20.0}},
      {Channel::kWet, 1, {}, ConstantStimulus{20.0}},
  };
  ClockConfig clock;
  AdcConfig adc;
  pport::HandshakeMap handshake;
  pport::HandshakeTiming timing;
  PsychroConfig psychro;
  // Integration step of the anti-alias filter between ticks.
  double filter_step_s = 1e-3;
  std::uint64_t seed = 0;
  std::string run_id = "sim";
  std::int64_t start_epoch_ms = 0;
  std::size_t fifo_capacity = 1024;
  bool allow_misaligned_chain = false;

  // Throws kInvalidInput (or kClockRange for an out-of-window clock).
  void validate() const;
  // Undersampling notices, one per offending channel.
  std::vector<std::string> warnings() const;
  // Stable text rendering of every setting, used for the log fingerprint.
  std::string describe() const;
  std::string fingerprint() const;
  std::string channel_map() const;
};

// floor(duration * rate) + 1, tolerant of decimal inputs whose binary
// product lands a hair below an integer.
std::size_t tick_count(double duration_s, double sample_rate_hz);
// k / rate, computed per tick so no error accumulates.
double tick_time(std::size_t k, double sample_rate_hz);

class SampleSink {
 public:
  virtual ~SampleSink() = default;
  virtual void consume(const Sample& sample) = 0;
  virtual void finish() {}
};

enum class Scheduling { kSimulated, kWallClock };

struct RunOptions {
  Scheduling scheduling = Scheduling::kSimulated;
  // Deliver to each sink from its own thread through a bounded FIFO.
  bool threaded_sinks = false;
  // Called before each tick's conversions; lets tests disturb the device.
  std::function<void(pport::SimulatedAdcPort&, std::size_t tick)> on_tick;
};

struct RunOutcome {
  RunLog log;
  std::vector<Sample> samples;
  std::vector<std::string> warnings;
  std::uint64_t dropped = 0;
  // Set when the run stopped early; log and samples hold what was acquired.
  std::optional<Error> error;

  bool ok() const { return !error.has_value(); }
};

RunOutcome run_acquisition(const RunConfig& cfg, std::span<SampleSink* const> sinks = {},
                           const RunOptions& options = {});

struct ChannelStats {
  double mean_c = 0.0;
  double min_c = 0.0;
  double max_c = 0.0;
  std::size_t count = 0;
};

struct RunSummary {
  ChannelStats dry;
  ChannelStats wet;
  std::optional<double> mean_rh_pct;
  std::optional<double> mean_dew_point_c;
  std::size_t rows = 0;
};

// Throws kEmptyInput for a log without rows.
RunSummary summarize(const RunLog& log);

}  // namespace paraloq

namespace paraloq {

// Streams completed ticks (one dry and one wet sample) to a CSV log as the
// run progresses.
class CsvLogSink final : public SampleSink {
 public:
  CsvLogSink(const std::filesystem::path& path, const RunConfig& cfg);

  void consume(const Sample& sample) override;
  void finish() override;

  std::size_t rows_written() const { return writer_.rows_written(); }

 private:
  CsvLogWriter writer_;
  PsychroConfig psychro_;
  std::int64_t start_epoch_ms_;
  std::optional<Sample> dry_;
  std::optional<Sample> wet_;
};

}  // namespace paraloq
