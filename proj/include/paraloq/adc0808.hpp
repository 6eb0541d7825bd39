#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

// Model of an 8-bit successive-approximation converter in the ADC0808 mould:
// RC clock generator, SAR conversion loop, ideal quantizer and decoders.

namespace paraloq {

inline constexpr double kMinClockHz = 10e3;
inline constexpr double kMaxClockHz = 1280e3;
// Constant of the Schmitt-trigger RC oscillator, f = 1 / (k * R * C).
inline constexpr double kOscillatorConstant = 1.1;

struct ClockConfig {
  double r_ohms = 1.0 / (kOscillatorConstant * 640e3 * 1e-9);  // 640 kHz with 1 nF
  double c_farads = 1e-9;
};

struct ClockFrequency {
  double hz = 0.0;
  // Set when hz falls outside [kMinClockHz, kMaxClockHz]. The value is still
  // returned; using it for a conversion raises kClockRange.
  std::optional<std::string> warning;

  bool in_window() const { return !warning.has_value(); }
};

ClockFrequency clock_frequency(const ClockConfig& cfg);

// R*C product that makes the oscillator run at hz.
double rc_for_frequency(double hz);

bool clock_in_window(double hz);

struct AdcConfig {
  static constexpr int kBits = 8;
  static constexpr int kCodes = 1 << kBits;
  static constexpr int kMaxCode = kCodes - 1;

  double vref = 5.0;
  int conversion_cycles = 64;
  double unadjusted_error_lsb = 0.5;
  double noise_sigma_lsb = 0.0;

  void validate() const;

  // Width of one quantizer step, vref / 256.
  double step_volts() const { return vref / kCodes; }
  // Decode span per code, vref / 255, so the top code reads back as vref.
  double decode_volts_per_code() const { return vref / kMaxCode; }
};

struct AdcCode {
  std::uint8_t code = 0;
  std::array<bool, AdcConfig::kBits> sar_trace{};  // MSB first
  double latency_s = 0.0;
  int channel = 0;
};

struct SarStep {
  int index = 0;  // 0 = MSB
  int trial_code = 0;
  double threshold_volts = 0.0;
  bool kept = false;
};

using SarSteps = std::array<SarStep, AdcConfig::kBits>;

// floor(v * 256 / vref) clamped to [0, 255], computed as an exact floor of
// the real quotient so it agrees with the SAR comparisons bit for bit.
int quantize(double v_in, const AdcConfig& cfg);

AdcCode sar_convert(double v_in, int channel, double clock_hz, const AdcConfig& cfg);

// Same conversion, also returning the per-bit decisions for a trace dump.
AdcCode sar_convert(double v_in, int channel, double clock_hz, const AdcConfig& cfg,
                    SarSteps& steps);

// One line per step: "<index> <trial_code> <threshold_volts> <keep|drop>".
void write_sar_trace(std::ostream& out, const SarSteps& steps);

double conversion_latency(double clock_hz, const AdcConfig& cfg);

// Full 0..255 code span covers 0..50 degC.
inline constexpr double kTempSpanC = 50.0;

double decode_temp(int code);
double decode_volts(int code, const AdcConfig& cfg);

}  // namespace paraloq
