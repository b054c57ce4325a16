#include <immintrin.h>

#include "wbansync/simd/fir.hpp"

namespace wbansync::simd::detail {

// One __m256d holds two consecutive complex samples, so a broadcast tap times
// a load at in[n + j] advances outputs n and n + 1 together. Four accumulators
// cover eight outputs per pass.
void correlate_avx2(const double* in, const double* taps, std::size_t ntaps, double* out,
                    std::size_t nout) {
  std::size_t n = 0;
  for (; n + 8 <= nout; n += 8) {
    const double* x = in + 2 * n;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    for (std::size_t j = 0; j < ntaps; ++j) {
      const __m256d t = _mm256_broadcast_sd(taps + j);
      const double* xj = x + 2 * j;
      acc0 = _mm256_fmadd_pd(t, _mm256_loadu_pd(xj), acc0);
      acc1 = _mm256_fmadd_pd(t, _mm256_loadu_pd(xj + 4), acc1);
      acc2 = _mm256_fmadd_pd(t, _mm256_loadu_pd(xj + 8), acc2);
      acc3 = _mm256_fmadd_pd(t, _mm256_loadu_pd(xj + 12), acc3);
    }
    _mm256_storeu_pd(out + 2 * n, acc0);
    _mm256_storeu_pd(out + 2 * n + 4, acc1);
    _mm256_storeu_pd(out + 2 * n + 8, acc2);
    _mm256_storeu_pd(out + 2 * n + 12, acc3);
  }
  for (; n + 2 <= nout; n += 2) {
    const double* x = in + 2 * n;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < ntaps; ++j) {
      acc = _mm256_fmadd_pd(_mm256_broadcast_sd(taps + j), _mm256_loadu_pd(x + 2 * j), acc);
    }
    _mm256_storeu_pd(out + 2 * n, acc);
  }
  if (n < nout) {
    const double* x = in + 2 * n;
    __m128d acc = _mm_setzero_pd();
    for (std::size_t j = 0; j < ntaps; ++j) {
      acc = _mm_fmadd_pd(_mm_set1_pd(taps[j]), _mm_loadu_pd(x + 2 * j), acc);
    }
    _mm_storeu_pd(out + 2 * n, acc);
  }
}

}  // namespace wbansync::simd::detail
