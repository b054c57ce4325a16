#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace wbansync::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

/// Instruction sets compiled into this build and supported by the running CPU.
bool isa_available(Isa isa);

/// Widest available ISA, unless overridden by set_isa() or the
/// WBANSYNC_ISA environment variable (scalar|avx2|neon).
Isa active_isa();

/// Forces a kernel family. Throws std::invalid_argument if `isa` is not available.
void set_isa(Isa isa);

/// Drops any set_isa() override and re-runs detection.
void reset_isa();

// Real-tap correlation over interleaved complex samples:
//   out[n] = sum_{j < ntaps} taps[j] * in[n + j],   n < nout
// `in` must hold at least nout + ntaps - 1 complex values. Kernels take raw
// interleaved (re, im) doubles so each ISA translation unit stays free of
// <complex>.
using CorrelateFn = void (*)(const double* in, const double* taps, std::size_t ntaps,
                             double* out, std::size_t nout);

namespace detail {
void correlate_scalar(const double* in, const double* taps, std::size_t ntaps, double* out,
                      std::size_t nout);
void correlate_avx2(const double* in, const double* taps, std::size_t ntaps, double* out,
                    std::size_t nout);
void correlate_neon(const double* in, const double* taps, std::size_t ntaps, double* out,
                    std::size_t nout);
}  // namespace detail

CorrelateFn correlate_kernel(Isa isa);

/// Valid-mode correlation with the active kernel; out.size() must equal
/// in.size() - taps.size() + 1.
void correlate(std::span<const std::complex<double>> in, std::span<const double> taps,
               std::span<std::complex<double>> out);

/// Same as correlate() with an explicit kernel family.
void correlate(Isa isa, std::span<const std::complex<double>> in, std::span<const double> taps,
               std::span<std::complex<double>> out);

}  // namespace wbansync::simd
