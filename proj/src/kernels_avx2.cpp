// AVX2 variant of the masked reduction kernel.  Compiled with -mavx2 and
// entered only after a runtime cpuid check (see kernels.cpp).

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "ttp/kernels.hpp"

namespace ttp::kernels::detail {

double masked_sum_avx2(const double* values, const std::uint8_t* mask,
                       std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    // 8 mask bytes -> two 4x64 lanes; nonzero byte becomes an all-ones lane.
    __m128i bytes =
        _mm_loadl_epi64(reinterpret_cast<const __m128i*>(mask + i));
    __m256i lane0 = _mm256_cvtepu8_epi64(bytes);
    __m256i lane1 = _mm256_cvtepu8_epi64(_mm_srli_si128(bytes, 4));
    __m256d sel0 =
        _mm256_castsi256_pd(_mm256_cmpgt_epi64(lane0, zero));
    __m256d sel1 =
        _mm256_castsi256_pd(_mm256_cmpgt_epi64(lane1, zero));
    acc0 = _mm256_add_pd(acc0, _mm256_and_pd(_mm256_loadu_pd(values + i), sel0));
    acc1 =
        _mm256_add_pd(acc1, _mm256_and_pd(_mm256_loadu_pd(values + i + 4), sel1));
  }
  __m256d acc = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    if (mask[i]) total += values[i];
  }
  return total;
}

}  // namespace ttp::kernels::detail

#endif  // x86_64
