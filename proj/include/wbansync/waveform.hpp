#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "wbansync/diff_mapper.hpp"

namespace wbansync {

/// Square-root raised cosine, time in symbol periods, unit symbol period.
/// Not normalized; the singular points t = 0 and |t| = 1/(4 alpha) use their limits.
double srrc(double t, double rolloff);

/// Closed-form normalized second spectral moment of the SRRC energy spectrum,
/// xi = T^2 * int f^2 |H(f)|^2 df / int |H(f)|^2 df = 1/12 + alpha^2 (1/4 - 2/pi^2).
double spectral_moment(double rolloff);

struct PulseShape {
  double rolloff = 0.3;
  int span = 8;  // symbol periods on each side of the peak
  int sps = 8;
  double scale = 1.0;        // taps[n] = scale * srrc(n / sps)
  std::vector<double> taps;  // 2 * span * sps + 1 values, centre at span * sps

  /// Scaled, truncated continuous pulse; 0 for |t| > span.
  double value(double t) const;
  std::size_t half_length() const { return static_cast<std::size_t>(span) * sps; }
};

/// Unit-energy SRRC taps. Throws std::invalid_argument unless 0 <= rolloff <= 1,
/// span >= 4 and sps is even and >= 4.
PulseShape srrc_taps(double rolloff, int span, int sps);

struct ReceivedSignal {
  std::vector<cplx> samples;
  int sps = 8;
  double start_time = 0.0;  // time of samples[0], in symbol periods
  double true_delay = 0.0;
  double noise_sigma2 = 0.0;
  double es_n0_db = std::numeric_limits<double>::infinity();
};

/// Per-component matched-filter noise variance for Es = 1: 1 / (2 * 10^(EsN0/10)).
double noise_variance(double es_n0_db);

/// Noise-free transmit waveform delayed by `delay` symbol periods; the pulse is
/// evaluated analytically at the shifted instants. Symbol a_k sits at time k.
/// Throws std::invalid_argument for |delay| > 0.5.
ReceivedSignal shape(const SymbolStream& symbols, const PulseShape& pulse, double delay);

/// Adds circular complex white Gaussian noise with per-component variance
/// noise_variance(es_n0_db). +inf leaves the samples untouched.
ReceivedSignal add_noise(ReceivedSignal signal, double es_n0_db, std::uint64_t seed);

struct Interpolated {
  cplx value;
  cplx derivative;  // d/du, per symbol period
};

/// Receive-filtered samples addressed by (symbol index, timing hypothesis).
/// Immutable once built; safe to share across threads.
class MatchedFilterBank {
 public:
  MatchedFilterBank(std::vector<cplx> filtered, int sps, double start_time);

  /// x_k(u) by 4-point cubic Lagrange interpolation at time k + u.
  /// Throws std::out_of_range if the stencil leaves the filtered range.
  cplx sample_at(std::size_t k, double u) const;

  /// x_k(u) together with the analytic derivative of the interpolating cubic.
  Interpolated evaluate(std::size_t k, double u) const;

  /// z_k(u) = x_k(u) conj(x_{k-1}(u)); k == 0 throws std::invalid_argument.
  cplx differential_observable(std::size_t k, double u) const;

  /// dz_k/du = x'_k conj(x_{k-1}) + x_k conj(x'_{k-1}).
  cplx observable_derivative(std::size_t k, double u) const;

  struct Observation {
    cplx z;
    cplx dz;
  };
  /// z_k(u) and dz_k/du from a single pair of interpolations.
  Observation observe(std::size_t k, double u) const;

  const std::vector<cplx>& samples() const { return y_; }
  int sps() const { return sps_; }
  double start_time() const { return start_; }
  /// Time interval over which sample_at() is defined.
  double first_time() const;
  double last_time() const;

 private:
  Interpolated interpolate(double time) const;

  std::vector<cplx> y_;
  int sps_;
  double start_;
};

/// Correlates with the (symmetric) pulse taps and drops the filter transient so
/// that fractional time k + u addresses symbol k at hypothesis u.
MatchedFilterBank matched_filter(const ReceivedSignal& received, const PulseShape& pulse);

}  // namespace wbansync
