#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "wbansync/simd/fir.hpp"

namespace wbansync::simd {

namespace {

bool cpu_has_avx2() {
#if defined(WBANSYNC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("WBANSYNC_ISA")) {
    const std::string name(env);
    if (name == "scalar") return Isa::Scalar;
    if (name == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
    if (name == "neon" && isa_available(Isa::Neon)) return Isa::Neon;
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

// -1 means "not yet detected".
std::atomic<int> g_isa{-1};

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: {
      static const bool ok = cpu_has_avx2();
      return ok;
    }
    case Isa::Neon:
#if defined(WBANSYNC_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  int v = g_isa.load(std::memory_order_acquire);
  if (v < 0) {
    v = static_cast<int>(detect());
    g_isa.store(v, std::memory_order_release);
  }
  return static_cast<Isa>(v);
}

void set_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("SIMD kernel family '" + std::string(to_string(isa)) +
                                "' is not available on this machine");
  }
  g_isa.store(static_cast<int>(isa), std::memory_order_release);
}

void reset_isa() { g_isa.store(-1, std::memory_order_release); }

CorrelateFn correlate_kernel(Isa isa) {
  switch (isa) {
#if defined(WBANSYNC_HAVE_AVX2)
    case Isa::Avx2: return &detail::correlate_avx2;
#endif
#if defined(WBANSYNC_HAVE_NEON)
    case Isa::Neon: return &detail::correlate_neon;
#endif
    default: return &detail::correlate_scalar;
  }
}

void correlate(Isa isa, std::span<const std::complex<double>> in, std::span<const double> taps,
               std::span<std::complex<double>> out) {
  if (taps.empty() || in.size() < taps.size() || out.size() != in.size() - taps.size() + 1) {
    throw std::invalid_argument("correlate: output length must be input length - taps + 1");
  }
  if (!isa_available(isa)) {
    throw std::invalid_argument("correlate: kernel family not available");
  }
  // std::complex<double> is layout-compatible with double[2].
  correlate_kernel(isa)(reinterpret_cast<const double*>(in.data()), taps.data(), taps.size(),
                        reinterpret_cast<double*>(out.data()), out.size());
}

void correlate(std::span<const std::complex<double>> in, std::span<const double> taps,
               std::span<std::complex<double>> out) {
  correlate(active_isa(), in, taps, out);
}

}  // namespace wbansync::simd
