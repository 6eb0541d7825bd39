#include "paraloq/adc0808.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "paraloq/error.hpp"

namespace paraloq {

namespace {

void check_channel(int channel) {
  if (channel < 0 || channel > 7) {
    fail(ErrorKind::kInvalidInput, "channel must be 0..7, got " + std::to_string(channel));
  }
}

std::string format_hz(double hz) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g Hz", hz);
  return buf;
}

}  // namespace

bool clock_in_window(double hz) { return hz >= kMinClockHz && hz <= kMaxClockHz; }

ClockFrequency clock_frequency(const ClockConfig& cfg) {
  if (!(cfg.r_ohms > 0.0) || !std::isfinite(cfg.r_ohms)) {
    fail(ErrorKind::kInvalidInput, "clock resistor must be > 0 ohm");
  }
  if (!(cfg.c_farads > 0.0) || !std::isfinite(cfg.c_farads)) {
    fail(ErrorKind::kInvalidInput, "clock capacitor must be > 0 F");
  }
  ClockFrequency out;
  out.hz = 1.0 / (kOscillatorConstant * cfg.r_ohms * cfg.c_farads);
  if (!clock_in_window(out.hz)) {
    out.warning = "clock " + format_hz(out.hz) + " outside the 10 kHz..1280 kHz converter window";
  }
  return out;
}

double rc_for_frequency(double hz) {
  if (!(hz > 0.0) || !std::isfinite(hz)) fail(ErrorKind::kInvalidInput, "frequency must be > 0");
  return 1.0 / (kOscillatorConstant * hz);
}

void AdcConfig::validate() const {
  if (!(vref > 0.0) || !std::isfinite(vref)) fail(ErrorKind::kInvalidInput, "adc vref must be > 0");
  if (conversion_cycles <= 0) fail(ErrorKind::kInvalidInput, "conversion_cycles must be > 0");
  if (!(unadjusted_error_lsb >= 0.0)) {
    fail(ErrorKind::kInvalidInput, "unadjusted_error_lsb must be >= 0");
  }
  if (!(noise_sigma_lsb >= 0.0)) fail(ErrorKind::kInvalidInput, "noise_sigma_lsb must be >= 0");
}

int quantize(double v_in, const AdcConfig& cfg) {
  if (!std::isfinite(v_in)) fail(ErrorKind::kInvalidInput, "converter input must be finite");
  const double scaled = v_in * AdcConfig::kCodes;
  double q = std::floor(scaled / cfg.vref);
  // The division rounds; nudge q so that q*vref <= scaled < (q+1)*vref holds.
  if (q * cfg.vref > scaled) {
    q -= 1.0;
  } else if ((q + 1.0) * cfg.vref <= scaled) {
    q += 1.0;
  }
  if (q < 0.0) return 0;
  if (q > AdcConfig::kMaxCode) return AdcConfig::kMaxCode;
  return static_cast<int>(q);
}

double conversion_latency(double clock_hz, const AdcConfig& cfg) {
  return cfg.conversion_cycles / clock_hz;
}

AdcCode sar_convert(double v_in, int channel, double clock_hz, const AdcConfig& cfg,
                    SarSteps& steps) {
  if (!std::isfinite(clock_hz) || !clock_in_window(clock_hz)) {
    fail(ErrorKind::kClockRange, "conversion clock " + format_hz(clock_hz) +
                                     " outside the 10 kHz..1280 kHz window");
  }
  check_channel(channel);
  if (!std::isfinite(v_in)) fail(ErrorKind::kInvalidInput, "converter input must be finite");

  AdcCode out;
  out.channel = channel;
  int code = 0;
  for (int i = 0; i < AdcConfig::kBits; ++i) {
    const int bit = 1 << (AdcConfig::kBits - 1 - i);
    const int trial = code | bit;
    const double threshold = trial * cfg.vref / AdcConfig::kCodes;
    const bool keep = v_in >= threshold;
    if (keep) code = trial;
    out.sar_trace[i] = keep;
    steps[i] = SarStep{i, trial, threshold, keep};
  }
  out.code = static_cast<std::uint8_t>(code);
  out.latency_s = conversion_latency(clock_hz, cfg);
  return out;
}

AdcCode sar_convert(double v_in, int channel, double clock_hz, const AdcConfig& cfg) {
  SarSteps steps{};
  return sar_convert(v_in, channel, clock_hz, cfg, steps);
}

void write_sar_trace(std::ostream& out, const SarSteps& steps) {
  char buf[96];
  for (const auto& s : steps) {
    std::snprintf(buf, sizeof buf, "%d %d %.6f %s\n", s.index, s.trial_code, s.threshold_volts,
                  s.kept ? "keep" : "drop");
    out << buf;
  }
}

double decode_temp(int code) {
  if (code < 0 || code > AdcConfig::kMaxCode) {
    fail(ErrorKind::kInvalidInput, "code must be 0..255, got " + std::to_string(code));
  }
  return code * kTempSpanC / AdcConfig::kMaxCode;
}

double decode_volts(int code, const AdcConfig& cfg) {
  if (code < 0 || code > AdcConfig::kMaxCode) {
    fail(ErrorKind::kInvalidInput, "code must be 0..255, got " + std::to_string(code));
  }
  return code * cfg.vref / AdcConfig::kMaxCode;
}

}  // namespace paraloq
