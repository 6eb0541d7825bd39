// Compiled with -mavx2 only; callers must check isa_available(Isa::kAvx2).

#include <immintrin.h>

#include "paraloq/adc0808.hpp"
#include "paraloq/kernels.hpp"

namespace paraloq::kernels::detail {

void chain_volts_avx2(const double* in, double* out, std::size_t n, double slope, double gain,
                      double clamp) {
  const __m256d vslope = _mm256_set1_pd(slope);
  const __m256d vgain = _mm256_set1_pd(gain);
  const __m256d vclamp = _mm256_set1_pd(clamp);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_mul_pd(_mm256_mul_pd(vslope, _mm256_loadu_pd(in + i)), vgain);
    // Operand order mirrors std::max(x, 0) / std::min(x, clamp) so signed
    // zeros come out the same as the scalar path.
    x = _mm256_max_pd(zero, x);
    x = _mm256_min_pd(vclamp, x);
    _mm256_storeu_pd(out + i, x);
  }
  chain_volts_scalar(in + i, out + i, n - i, slope, gain, clamp);
}

void quantize_avx2(const double* in, std::uint8_t* out, std::size_t n, double vref) {
  const __m256d vcodes = _mm256_set1_pd(AdcConfig::kCodes);
  const __m256d vvref = _mm256_set1_pd(vref);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d top = _mm256_set1_pd(AdcConfig::kMaxCode);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d scaled = _mm256_mul_pd(_mm256_loadu_pd(in + i), vcodes);
    __m256d q = _mm256_floor_pd(_mm256_div_pd(scaled, vvref));
    const __m256d over = _mm256_cmp_pd(_mm256_mul_pd(q, vvref), scaled, _CMP_GT_OQ);
    q = _mm256_sub_pd(q, _mm256_and_pd(over, one));
    const __m256d under =
        _mm256_cmp_pd(_mm256_mul_pd(_mm256_add_pd(q, one), vvref), scaled, _CMP_LE_OQ);
    q = _mm256_add_pd(q, _mm256_and_pd(under, one));
    q = _mm256_min_pd(top, _mm256_max_pd(zero, q));
    const __m128i q32 = _mm256_cvttpd_epi32(q);
    const __m128i q8 = _mm_packus_epi16(_mm_packs_epi32(q32, q32), _mm_setzero_si128());
    const int packed = _mm_cvtsi128_si32(q8);
    __builtin_memcpy(out + i, &packed, 4);
  }
  quantize_scalar(in + i, out + i, n - i, vref);
}

void decode_temps_avx2(const std::uint8_t* in, double* out, std::size_t n) {
  const __m256d span = _mm256_set1_pd(kTempSpanC);
  const __m256d top = _mm256_set1_pd(AdcConfig::kMaxCode);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    int packed = 0;
    __builtin_memcpy(&packed, in + i, 4);
    const __m128i codes = _mm_cvtepu8_epi32(_mm_cvtsi32_si128(packed));
    const __m256d c = _mm256_cvtepi32_pd(codes);
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_mul_pd(c, span), top));
  }
  decode_temps_scalar(in + i, out + i, n - i);
}

}  // namespace paraloq::kernels::detail
