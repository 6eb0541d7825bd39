#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "paraloq/error.hpp"
#include "paraloq/kernels.hpp"

namespace paraloq::kernels {

namespace {

template <typename A, typename B>
void check_sizes(std::span<A> in, std::span<B> out) {
  if (in.size() != out.size()) {
    fail(ErrorKind::kInvalidInput, "batch input and output sizes differ (" +
                                       std::to_string(in.size()) + " vs " +
                                       std::to_string(out.size()) + ")");
  }
}

void check_finite(std::span<const double> in, const char* what) {
  if (!std::all_of(in.begin(), in.end(), [](double v) { return std::isfinite(v); })) {
    fail(ErrorKind::kInvalidInput, std::string(what) + " batch contains a non-finite value");
  }
}

void require(Isa isa) {
  if (!isa_available(isa)) {
    fail(ErrorKind::kUnsupportedMode,
         "kernel ISA " + std::string(to_string(isa)) + " not available on this host");
  }
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(PARALOQ_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() { return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

Isa active_isa() {
  const char* forced = std::getenv("PARALOQ_KERNEL");
  if (forced != nullptr && std::string(forced) == "scalar") return Isa::kScalar;
  return detected_isa();
}

void chain_volts(Isa isa, std::span<const double> temps_c, std::span<double> volts,
                 const ChainConfig& cfg) {
  check_sizes(temps_c, volts);
  check_finite(temps_c, "temperature");
  require(isa);
#if defined(PARALOQ_HAVE_AVX2)
  if (isa == Isa::kAvx2) {
    detail::chain_volts_avx2(temps_c.data(), volts.data(), temps_c.size(), cfg.sensor_slope,
                             cfg.amp_gain, cfg.clamp_volts);
    return;
  }
#endif
  detail::chain_volts_scalar(temps_c.data(), volts.data(), temps_c.size(), cfg.sensor_slope,
                             cfg.amp_gain, cfg.clamp_volts);
}

void quantize(Isa isa, std::span<const double> volts, std::span<std::uint8_t> codes,
              double vref) {
  check_sizes(volts, codes);
  check_finite(volts, "voltage");
  if (!(vref > 0.0)) fail(ErrorKind::kInvalidInput, "vref must be > 0");
  require(isa);
#if defined(PARALOQ_HAVE_AVX2)
  if (isa == Isa::kAvx2) {
    detail::quantize_avx2(volts.data(), codes.data(), volts.size(), vref);
    return;
  }
#endif
  detail::quantize_scalar(volts.data(), codes.data(), volts.size(), vref);
}

void decode_temps(Isa isa, std::span<const std::uint8_t> codes, std::span<double> temps_c) {
  check_sizes(codes, temps_c);
  require(isa);
#if defined(PARALOQ_HAVE_AVX2)
  if (isa == Isa::kAvx2) {
    detail::decode_temps_avx2(codes.data(), temps_c.data(), codes.size());
    return;
  }
#endif
  detail::decode_temps_scalar(codes.data(), temps_c.data(), codes.size());
}

void chain_volts(std::span<const double> temps_c, std::span<double> volts,
                 const ChainConfig& cfg) {
  chain_volts(active_isa(), temps_c, volts, cfg);
}

void quantize(std::span<const double> volts, std::span<std::uint8_t> codes, double vref) {
  quantize(active_isa(), volts, codes, vref);
}

void decode_temps(std::span<const std::uint8_t> codes, std::span<double> temps_c) {
  decode_temps(active_isa(), codes, temps_c);
}

}  // namespace paraloq::kernels
