#include <arm_neon.h>

#include "wbansync/simd/fir.hpp"

namespace wbansync::simd::detail {

// float64x2_t is exactly one complex sample; two accumulators per pass.
void correlate_neon(const double* in, const double* taps, std::size_t ntaps, double* out,
                    std::size_t nout) {
  std::size_t n = 0;
  for (; n + 2 <= nout; n += 2) {
    const double* x = in + 2 * n;
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    for (std::size_t j = 0; j < ntaps; ++j) {
      acc0 = vfmaq_n_f64(acc0, vld1q_f64(x + 2 * j), taps[j]);
      acc1 = vfmaq_n_f64(acc1, vld1q_f64(x + 2 * j + 2), taps[j]);
    }
    vst1q_f64(out + 2 * n, acc0);
    vst1q_f64(out + 2 * n + 2, acc1);
  }
  if (n < nout) {
    const double* x = in + 2 * n;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t j = 0; j < ntaps; ++j) {
      acc = vfmaq_n_f64(acc, vld1q_f64(x + 2 * j), taps[j]);
    }
    vst1q_f64(out + 2 * n, acc);
  }
}

}  // namespace wbansync::simd::detail
