#include "paraloq/acquisition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <thread>

#include "paraloq/bounded_fifo.hpp"
#include "paraloq/timestamp.hpp"

namespace paraloq {

namespace {

constexpr std::size_t kMaxTicks = 100'000'000;

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(ErrorKind::kInvalidInput,
         "bad " + std::string(what) + " '" + std::string(text) + "' in stimulus");
  }
  return v;
}

std::vector<std::string_view> split_colon(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(':', start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void validate_stimulus(const Stimulus& s, Channel ch) {
  const std::string who = "channel " + std::string(to_string(ch));
  if (const auto* c = std::get_if<ConstantStimulus>(&s)) {
    if (!std::isfinite(c->temp_c)) fail(ErrorKind::kInvalidInput, who + ": constant must be finite");
  } else if (const auto* w = std::get_if<SineStimulus>(&s)) {
    if (!std::isfinite(w->amplitude_c) || !std::isfinite(w->offset_c) ||
        !std::isfinite(w->freq_hz) || w->freq_hz < 0.0) {
      fail(ErrorKind::kInvalidInput, who + ": sine needs finite amplitude/offset and freq >= 0");
    }
  } else {
    const auto& r = std::get<ReplayStimulus>(s);
    if (r.t_s.empty() || r.t_s.size() != r.temp_c.size()) {
      fail(ErrorKind::kInvalidInput, who + ": replay series is empty");
    }
  }
}

// Fans samples out to sinks, either inline or through one FIFO + thread per
// sink.
class SinkDispatcher {
 public:
  SinkDispatcher(std::span<SampleSink* const> sinks, bool threaded, std::size_t capacity)
      : sinks_(sinks.begin(), sinks.end()), threaded_(threaded) {
    if (!threaded_) return;
    for (SampleSink* sink : sinks_) {
      auto lane = std::make_unique<Lane>(capacity);
      Lane* raw = lane.get();
      lane->worker = std::thread([raw, sink] {
        while (auto s = raw->fifo.pop()) {
          if (raw->failure) continue;
          try {
            sink->consume(*s);
          } catch (...) {
            raw->failure = std::current_exception();
          }
        }
      });
      lanes_.push_back(std::move(lane));
    }
  }

  SinkDispatcher(const SinkDispatcher&) = delete;
  SinkDispatcher& operator=(const SinkDispatcher&) = delete;

  ~SinkDispatcher() { stop(); }

  void deliver(const Sample& s) {
    if (!threaded_) {
      for (SampleSink* sink : sinks_) sink->consume(s);
      return;
    }
    for (auto& lane : lanes_) lane->fifo.push(s);
  }

  // Drains and joins; rethrows the first sink failure. Returns drop count.
  std::uint64_t finish() {
    stop();
    std::uint64_t dropped = 0;
    for (auto& lane : lanes_) {
      dropped += lane->fifo.dropped();
      if (lane->failure) std::rethrow_exception(lane->failure);
    }
    for (SampleSink* sink : sinks_) sink->finish();
    return dropped;
  }

 private:
  struct Lane {
    explicit Lane(std::size_t capacity) : fifo(capacity) {}
    BoundedFifo<Sample> fifo;
    std::thread worker;
    std::exception_ptr failure;
  };

  void stop() {
    for (auto& lane : lanes_) {
      lane->fifo.close();
      if (lane->worker.joinable()) lane->worker.join();
    }
  }

  std::vector<SampleSink*> sinks_;
  bool threaded_;
  std::vector<std::unique_ptr<Lane>> lanes_;
};

}  // namespace

std::string_view to_string(Channel ch) { return ch == Channel::kDry ? "dry" : "wet"; }

std::string Sample::timestamp() const { return format_iso8601_ms(epoch_ms); }

ReplayStimulus ReplayStimulus::from_log(const RunLog& log, Channel ch, std::string source) {
  ReplayStimulus r;
  r.source = std::move(source);
  r.t_s.reserve(log.rows.size());
  r.temp_c.reserve(log.rows.size());
  for (const auto& row : log.rows) {
    r.t_s.push_back(row.t_s);
    r.temp_c.push_back(ch == Channel::kDry ? row.dry_temp_c : row.wet_temp_c);
  }
  return r;
}

double stimulus_value(const Stimulus& s, double t) {
  if (const auto* c = std::get_if<ConstantStimulus>(&s)) return c->temp_c;
  if (const auto* w = std::get_if<SineStimulus>(&s)) {
    return w->offset_c + w->amplitude_c * std::sin(2.0 * std::numbers::pi * w->freq_hz * t);
  }
  const auto& r = std::get<ReplayStimulus>(s);
  if (r.t_s.empty()) fail(ErrorKind::kInvalidInput, "replay series is empty");
  // Rows are stored at microsecond resolution; allow for that when matching
  // a tick time to its row.
  const auto it = std::upper_bound(r.t_s.begin(), r.t_s.end(), t + 1e-6);
  if (it == r.t_s.begin()) return r.temp_c.front();
  return r.temp_c[static_cast<std::size_t>(std::distance(r.t_s.begin(), it)) - 1];
}

std::optional<double> stimulus_frequency(const Stimulus& s) {
  if (const auto* w = std::get_if<SineStimulus>(&s)) return w->freq_hz;
  if (std::holds_alternative<ConstantStimulus>(s)) return 0.0;
  return std::nullopt;
}

Stimulus parse_stimulus(std::string_view spec, Channel ch) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  if (colon == std::string_view::npos) {
    fail(ErrorKind::kInvalidInput, "stimulus '" + std::string(spec) + "' has no parameters");
  }
  const std::string_view rest = spec.substr(colon + 1);
  if (kind == "replay") {
    const std::string path(rest);
    return ReplayStimulus::from_log(read_csv(std::filesystem::path(path)), ch, path);
  }
  const auto parts = split_colon(rest);
  if (kind == "const" && parts.size() == 1) {
    return ConstantStimulus{parse_number(parts[0], "temperature")};
  }
  if (kind == "sine" && parts.size() == 3) {
    SineStimulus w{parse_number(parts[0], "amplitude"), parse_number(parts[1], "frequency"),
                   parse_number(parts[2], "offset")};
    if (w.freq_hz < 0.0) fail(ErrorKind::kInvalidInput, "sine frequency must be >= 0");
    return w;
  }
  fail(ErrorKind::kInvalidInput,
       "stimulus '" + std::string(spec) +
           "' is not const:<C>, sine:<amp>:<hz>:<offset> or replay:<path>");
}

std::size_t tick_count(double duration_s, double sample_rate_hz) {
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) {
    fail(ErrorKind::kInvalidInput, "duration must be >= 0");
  }
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    fail(ErrorKind::kInvalidInput, "sample rate must be > 0");
  }
  const double product = duration_s * sample_rate_hz;
  if (product >= static_cast<double>(kMaxTicks)) {
    fail(ErrorKind::kInvalidInput, "run would exceed the tick limit");
  }
  double whole = std::floor(product);
  if (product - whole > 1.0 - 1e-9 * std::max(1.0, product)) whole += 1.0;
  return static_cast<std::size_t>(whole) + 1;
}

double tick_time(std::size_t k, double sample_rate_hz) {
  return static_cast<double>(k) / sample_rate_hz;
}

void RunConfig::validate() const {
  tick_count(duration_s, sample_rate_hz);
  if (!(filter_step_s > 0.0) || !std::isfinite(filter_step_s)) {
    fail(ErrorKind::kInvalidInput, "filter step must be > 0");
  }
  if (fifo_capacity == 0) fail(ErrorKind::kInvalidInput, "fifo capacity must be > 0");
  int dry = 0;
  int wet = 0;
  std::array<bool, 8> used{};
  for (const auto& ch : channels) {
    (ch.channel == Channel::kDry ? dry : wet) += 1;
    if (ch.mux_input < 0 || ch.mux_input > 7) {
      fail(ErrorKind::kInvalidInput, "mux input must be 0..7");
    }
    if (used[static_cast<std::size_t>(ch.mux_input)]) {
      fail(ErrorKind::kInvalidInput, "two channels share mux input IN" +
                                         std::to_string(ch.mux_input));
    }
    used[static_cast<std::size_t>(ch.mux_input)] = true;
    ch.chain.validate(allow_misaligned_chain);
    validate_stimulus(ch.stimulus, ch.channel);
  }
  if (dry != 1 || wet != 1) {
    fail(ErrorKind::kInvalidInput, "a run needs exactly one dry and one wet channel");
  }
  adc.validate();
  handshake.validate();
  timing.validate();
  psychro.validate();
  const ClockFrequency clk = clock_frequency(clock);
  if (clk.warning) fail(ErrorKind::kClockRange, *clk.warning);
}

std::vector<std::string> RunConfig::warnings() const {
  std::vector<std::string> out;
  for (const auto& ch : channels) {
    const auto f = stimulus_frequency(ch.stimulus);
    if (f && is_undersampled(*f, sample_rate_hz)) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "channel %s: stimulus %.6g Hz exceeds half the %.6g S/s rate; "
                    "expect an alias at %.6g Hz",
                    std::string(to_string(ch.channel)).c_str(), *f, sample_rate_hz,
                    alias_frequency(*f, sample_rate_hz));
      out.emplace_back(buf);
    }
  }
  return out;
}

std::string RunConfig::channel_map() const {
  std::string out;
  for (const auto& ch : channels) {
    if (!out.empty()) out += ';';
    out += std::string(to_string(ch.channel)) + "=IN" + std::to_string(ch.mux_input);
  }
  return out;
}

std::string RunConfig::describe() const {
  std::ostringstream os;
  os << "rate=" << fmt17(sample_rate_hz) << ";duration=" << fmt17(duration_s)
     << ";clock_r=" << fmt17(clock.r_ohms) << ";clock_c=" << fmt17(clock.c_farads)
     << ";adc_vref=" << fmt17(adc.vref) << ";cycles=" << adc.conversion_cycles
     << ";noise=" << fmt17(adc.noise_sigma_lsb) << ";seed=" << seed
     << ";filter_step=" << fmt17(filter_step_s) << ";psy_coeff="
     << fmt17(psychro.psychrometer_coeff) << ";pressure=" << fmt17(psychro.pressure_hpa);
  for (const auto& ch : channels) {
    os << ";" << to_string(ch.channel) << "@IN" << ch.mux_input
       << ":slope=" << fmt17(ch.chain.sensor_slope) << ",gain=" << fmt17(ch.chain.amp_gain)
       << ",clamp=" << fmt17(ch.chain.clamp_volts) << ",fc=" << fmt17(ch.chain.filter_cutoff_hz)
       << ",vref=" << fmt17(ch.chain.vref) << ",stim=";
    if (const auto* c = std::get_if<ConstantStimulus>(&ch.stimulus)) {
      os << "const(" << fmt17(c->temp_c) << ")";
    } else if (const auto* w = std::get_if<SineStimulus>(&ch.stimulus)) {
      os << "sine(" << fmt17(w->amplitude_c) << "," << fmt17(w->freq_hz) << ","
         << fmt17(w->offset_c) << ")";
    } else {
      const auto& r = std::get<ReplayStimulus>(ch.stimulus);
      os << "replay(" << r.source << "," << r.t_s.size() << ")";
    }
  }
  return os.str();
}

std::string RunConfig::fingerprint() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : describe()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64-%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunOutcome run_acquisition(const RunConfig& cfg, std::span<SampleSink* const> sinks,
                           const RunOptions& options) {
  cfg.validate();

  RunOutcome out;
  out.warnings = cfg.warnings();
  out.log.meta.run_id = cfg.run_id;
  out.log.meta.start_epoch_ms = cfg.start_epoch_ms;
  out.log.meta.sample_rate_hz = cfg.sample_rate_hz;
  out.log.meta.channel_map = cfg.channel_map();
  out.log.meta.config_fingerprint = cfg.fingerprint();

  const double clock_hz = clock_frequency(cfg.clock).hz;
  pport::SimClock sim_clock;
  pport::WallClock wall_clock;
  pport::TimeSource& time = options.scheduling == Scheduling::kSimulated
                                ? static_cast<pport::TimeSource&>(sim_clock)
                                : static_cast<pport::TimeSource&>(wall_clock);
  pport::SimulatedAdcPort port(cfg.adc, clock_hz, time, cfg.handshake, cfg.seed);
  SinkDispatcher dispatch(sinks, options.threaded_sinks, cfg.fifo_capacity);

  const std::size_t ticks = tick_count(cfg.duration_s, cfg.sample_rate_hz);
  const std::size_t nch = cfg.channels.size();
  std::vector<double> held(nch, 0.0);
  out.samples.reserve(ticks * nch);
  out.log.rows.reserve(ticks);
  std::uint64_t seq = 0;
  double t_prev = 0.0;

  try {
    for (std::size_t k = 0; k < ticks; ++k) {
      const double t = tick_time(k, cfg.sample_rate_hz);

      for (std::size_t i = 0; i < nch; ++i) {
        const ChannelSetup& ch = cfg.channels[i];
        // Recorded data was band-limited when it was first acquired, so a
        // replay feeds the converter directly.
        if (k == 0 || std::holds_alternative<ReplayStimulus>(ch.stimulus)) {
          held[i] = chain_volts(stimulus_value(ch.stimulus, t), ch.chain);
          continue;
        }
        const double span = t - t_prev;
        const auto steps =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / cfg.filter_step_s - 1e-9)));
        const double dt = span / static_cast<double>(steps);
        for (std::size_t j = 1; j <= steps; ++j) {
          const double x = chain_volts(stimulus_value(ch.stimulus, t_prev + j * dt), ch.chain);
          held[i] = lowpass_step(held[i], x, dt, ch.chain);
        }
      }
      t_prev = t;

      time.wait_until(t);
      if (options.on_tick) options.on_tick(port, k);
      for (std::size_t i = 0; i < nch; ++i) port.set_input(cfg.channels[i].mux_input, held[i]);

      std::uint8_t dry_code = 0;
      std::uint8_t wet_code = 0;
      for (std::size_t i = 0; i < nch; ++i) {
        const ChannelSetup& ch = cfg.channels[i];
        const pport::AcquiredByte got = pport::acquire_byte(
            port, time, cfg.handshake, cfg.adc, clock_hz, ch.mux_input, cfg.timing);
        Sample s;
        s.seq = seq++;
        s.t = t;
        s.epoch_ms = cfg.start_epoch_ms + std::llround(t * 1000.0);
        s.channel = ch.channel;
        s.code = got.code.code;
        s.volts = decode_volts(s.code, cfg.adc);
        s.temp_c = decode_temp(s.code);
        (ch.channel == Channel::kDry ? dry_code : wet_code) = s.code;
        out.samples.push_back(s);
        dispatch.deliver(s);
      }
      out.log.rows.push_back(make_row(t, cfg.start_epoch_ms, dry_code, wet_code, cfg.psychro));
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDeviceTimeout) throw;
    out.error = e;
  }
  out.dropped = dispatch.finish();
  return out;
}

RunSummary summarize(const RunLog& log) {
  if (log.rows.empty()) fail(ErrorKind::kEmptyInput, "run log has no rows");
  RunSummary s;
  s.rows = log.rows.size();
  auto accumulate = [](ChannelStats& st, double v, double& sum) {
    if (st.count == 0) {
      st.min_c = v;
      st.max_c = v;
    } else {
      st.min_c = std::min(st.min_c, v);
      st.max_c = std::max(st.max_c, v);
    }
    sum += v;
    ++st.count;
  };
  double dry_sum = 0.0;
  double wet_sum = 0.0;
  double rh_sum = 0.0;
  double dew_sum = 0.0;
  std::size_t psy_rows = 0;
  for (const auto& row : log.rows) {
    accumulate(s.dry, decode_temp(row.dry_code), dry_sum);
    accumulate(s.wet, decode_temp(row.wet_code), wet_sum);
    if (row.rh_pct && row.dew_point_c) {
      rh_sum += *row.rh_pct;
      dew_sum += *row.dew_point_c;
      ++psy_rows;
    }
  }
  s.dry.mean_c = dry_sum / static_cast<double>(s.dry.count);
  s.wet.mean_c = wet_sum / static_cast<double>(s.wet.count);
  if (psy_rows > 0) {
    s.mean_rh_pct = rh_sum / static_cast<double>(psy_rows);
    s.mean_dew_point_c = dew_sum / static_cast<double>(psy_rows);
  }
  return s;
}

CsvLogSink::CsvLogSink(const std::filesystem::path& path, const RunConfig& cfg)
    : writer_(path,
              RunMeta{cfg.run_id, cfg.start_epoch_ms, cfg.sample_rate_hz, cfg.channel_map(),
                      cfg.fingerprint()}),
      psychro_(cfg.psychro),
      start_epoch_ms_(cfg.start_epoch_ms) {}

void CsvLogSink::consume(const Sample& sample) {
  auto& slot = sample.channel == Channel::kDry ? dry_ : wet_;
  slot = sample;
  if (dry_ && wet_ && dry_->t == wet_->t) {
    writer_.append(make_row(dry_->t, start_epoch_ms_, dry_->code, wet_->code, psychro_));
    dry_.reset();
    wet_.reset();
  }
}

void CsvLogSink::finish() { writer_.close(); }

}  // namespace paraloq
