#include "paraloq/signal_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "paraloq/error.hpp"

namespace paraloq {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    fail(ErrorKind::kInvalidInput, std::string(what) + " must be finite");
  }
}

}  // namespace

void ChainConfig::validate(bool allow_misaligned) const {
  if (!(sensor_slope > 0.0)) fail(ErrorKind::kInvalidInput, "sensor_slope must be > 0");
  if (!(amp_gain > 0.0)) fail(ErrorKind::kInvalidInput, "amp_gain must be > 0");
  if (!(vref > 0.0) || !std::isfinite(vref)) fail(ErrorKind::kInvalidInput, "vref must be > 0");
  if (!(clamp_volts > 0.0) || clamp_volts > vref) {
    fail(ErrorKind::kInvalidInput, "clamp_volts must lie in (0, vref]");
  }
  if (!(filter_cutoff_hz > 0.0) || !std::isfinite(filter_cutoff_hz)) {
    fail(ErrorKind::kInvalidInput, "filter_cutoff_hz must be > 0");
  }
  if (!allow_misaligned) {
    const double full_scale = sensor_slope * amp_gain * kFullScaleC;
    if (std::abs(full_scale - vref) > kAlignmentTolV) {
      fail(ErrorKind::kInvalidInput,
           "sensor_slope * amp_gain * 50 degC must equal vref (got " +
               std::to_string(full_scale) + " V)");
    }
  }
}

double sensor_voltage(double temp_c, const ChainConfig& cfg) {
  require_finite(temp_c, "temperature");
  return cfg.sensor_slope * temp_c;
}

double amplify_and_clamp(double v_in, const ChainConfig& cfg) {
  require_finite(v_in, "amplifier input");
  return std::min(std::max(cfg.amp_gain * v_in, 0.0), cfg.clamp_volts);
}

double chain_volts(double temp_c, const ChainConfig& cfg) {
  return amplify_and_clamp(sensor_voltage(temp_c, cfg), cfg);
}

double lowpass_step(double state, double x, double dt, const ChainConfig& cfg) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    fail(ErrorKind::kInvalidInput, "filter step dt must be > 0");
  }
  require_finite(state, "filter state");
  require_finite(x, "filter input");
  const double tau = 1.0 / (2.0 * std::numbers::pi * cfg.filter_cutoff_hz);
  const double alpha = dt / (dt + tau);
  return state + alpha * (x - state);
}

double alias_frequency(double f_signal, double f_sample) {
  if (!(f_sample > 0.0) || !std::isfinite(f_sample)) {
    fail(ErrorKind::kInvalidInput, "sample frequency must be > 0");
  }
  if (!(f_signal >= 0.0) || !std::isfinite(f_signal)) {
    fail(ErrorKind::kInvalidInput, "signal frequency must be >= 0");
  }
  const double folded = std::abs(f_signal - f_sample * std::round(f_signal / f_sample));
  return std::min(folded, f_sample / 2.0);
}

bool is_undersampled(double f_signal, double f_sample) {
  if (!(f_sample > 0.0)) fail(ErrorKind::kInvalidInput, "sample frequency must be > 0");
  return f_signal > f_sample / 2.0;
}

}  // namespace paraloq
