#include <algorithm>
#include <cmath>

#include "paraloq/adc0808.hpp"
#include "paraloq/kernels.hpp"

namespace paraloq::kernels::detail {

void chain_volts_scalar(const double* in, double* out, std::size_t n, double slope,
                        double gain, double clamp) {
  for (std::size_t i = 0; i < n; ++i) {
    const double amplified = slope * in[i] * gain;
    out[i] = std::min(std::max(amplified, 0.0), clamp);
  }
}

void quantize_scalar(const double* in, std::uint8_t* out, std::size_t n, double vref) {
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = in[i] * AdcConfig::kCodes;
    double q = std::floor(scaled / vref);
    if (q * vref > scaled) {
      q -= 1.0;
    } else if ((q + 1.0) * vref <= scaled) {
      q += 1.0;
    }
    q = std::min(std::max(q, 0.0), static_cast<double>(AdcConfig::kMaxCode));
    out[i] = static_cast<std::uint8_t>(q);
  }
}

void decode_temps_scalar(const std::uint8_t* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = in[i] * kTempSpanC / AdcConfig::kMaxCode;
  }
}

}  // namespace paraloq::kernels::detail
