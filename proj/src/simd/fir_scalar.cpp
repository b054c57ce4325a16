#include "wbansync/simd/fir.hpp"

namespace wbansync::simd::detail {

void correlate_scalar(const double* in, const double* taps, std::size_t ntaps, double* out,
                      std::size_t nout) {
  for (std::size_t n = 0; n < nout; ++n) {
    const double* x = in + 2 * n;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < ntaps; ++j) {
      re += taps[j] * x[2 * j];
      im += taps[j] * x[2 * j + 1];
    }
    out[2 * n] = re;
    out[2 * n + 1] = im;
  }
}

}  // namespace wbansync::simd::detail
