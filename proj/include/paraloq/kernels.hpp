#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "paraloq/signal_chain.hpp"

// Batch versions of the per-sample transfer functions, used for range sweeps
// and bulk decoding. Every ISA variant produces results bit-identical to the
// scalar reference (no FMA contraction, same operation order).

namespace paraloq::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

bool isa_available(Isa isa);

// Best ISA supported by this CPU and build.
Isa detected_isa();

// detected_isa() unless PARALOQ_KERNEL=scalar is set in the environment.
Isa active_isa();

void chain_volts(std::span<const double> temps_c, std::span<double> volts,
                 const ChainConfig& cfg);
void quantize(std::span<const double> volts, std::span<std::uint8_t> codes, double vref);
void decode_temps(std::span<const std::uint8_t> codes, std::span<double> temps_c);

// Explicit-ISA entry points, mainly for equivalence tests. Throw
// kUnsupportedMode when the ISA is not available.
void chain_volts(Isa isa, std::span<const double> temps_c, std::span<double> volts,
                 const ChainConfig& cfg);
void quantize(Isa isa, std::span<const double> volts, std::span<std::uint8_t> codes,
              double vref);
void decode_temps(Isa isa, std::span<const std::uint8_t> codes, std::span<double> temps_c);

namespace detail {

void chain_volts_scalar(const double* in, double* out, std::size_t n, double slope,
                        double gain, double clamp);
void quantize_scalar(const double* in, std::uint8_t* out, std::size_t n, double vref);
void decode_temps_scalar(const std::uint8_t* in, double* out, std::size_t n);

void chain_volts_avx2(const double* in, double* out, std::size_t n, double slope, double gain,
                      double clamp);
void quantize_avx2(const double* in, std::uint8_t* out, std::size_t n, double vref);
void decode_temps_avx2(const std::uint8_t* in, double* out, std::size_t n);

}  // namespace detail

}  // namespace paraloq::kernels
