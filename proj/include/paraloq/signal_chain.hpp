#pragma once

// Analog front end: LM35-style sensor, gain stage, zener clamp and the
// first-order anti-alias filter that sits in front of the converter input.

namespace paraloq {

struct ChainConfig {
  double sensor_slope = 0.010;  // V per degC
  double amp_gain = 10.0;
  double clamp_volts = 5.0;
  double filter_cutoff_hz = 0.5;
  double vref = 5.0;

  // Full-scale temperature the gain is aligned to.
  static constexpr double kFullScaleC = 50.0;
  static constexpr double kAlignmentTolV = 1e-9;

  // Throws kInvalidInput on a violated invariant. Full-scale alignment
  // (slope * gain * 50 degC == vref) is skipped when allow_misaligned is set.
  void validate(bool allow_misaligned = false) const;
};

double sensor_voltage(double temp_c, const ChainConfig& cfg);

// Ideal gain followed by a hard clamp to [0, clamp_volts].
double amplify_and_clamp(double v_in, const ChainConfig& cfg);

// Static transfer temperature -> converter input, without the filter.
double chain_volts(double temp_c, const ChainConfig& cfg);

// One explicit step of a first-order RC low-pass. Filter state is owned by
// the caller.
double lowpass_step(double state, double x, double dt, const ChainConfig& cfg);

// Apparent frequency after sampling at f_sample, folded into [0, f_sample/2].
double alias_frequency(double f_signal, double f_sample);

bool is_undersampled(double f_signal, double f_sample);

}  // namespace paraloq
