#include "wbansync/waveform.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "wbansync/simd/fir.hpp"

namespace wbansync {

namespace {

constexpr double kPi = std::numbers::pi;

// Lagrange basis on nodes -1, 0, 1, 2 and its derivative, at fraction mu in [0, 1).
void cubic_weights(double mu, double w[4], double dw[4]) {
  const double a = mu + 1.0;
  const double b = mu;
  const double c = mu - 1.0;
  const double d = mu - 2.0;
  w[0] = -b * c * d / 6.0;
  w[1] = a * c * d / 2.0;
  w[2] = -a * b * d / 2.0;
  w[3] = a * b * c / 6.0;
  dw[0] = -(c * d + b * d + b * c) / 6.0;
  dw[1] = (c * d + a * d + a * c) / 2.0;
  dw[2] = -(b * d + a * d + a * b) / 2.0;
  dw[3] = (b * c + a * c + a * b) / 6.0;
}

}  // namespace

double srrc(double t, double rolloff) {
  const double a = rolloff;
  if (std::abs(t) < 1e-12) return 1.0 - a + 4.0 * a / kPi;
  if (a > 0.0) {
    const double x = 4.0 * a * t;
    if (std::abs(std::abs(x) - 1.0) < 1e-10) {
      const double q = kPi / (4.0 * a);
      return a / std::numbers::sqrt2 *
             ((1.0 + 2.0 / kPi) * std::sin(q) + (1.0 - 2.0 / kPi) * std::cos(q));
    }
  }
  const double num = std::sin(kPi * t * (1.0 - a)) + 4.0 * a * t * std::cos(kPi * t * (1.0 + a));
  const double den = kPi * t * (1.0 - (4.0 * a * t) * (4.0 * a * t));
  return num / den;
}

double spectral_moment(double rolloff) {
  return 1.0 / 12.0 + rolloff * rolloff * (0.25 - 2.0 / (kPi * kPi));
}

double PulseShape::value(double t) const {
  if (std::abs(t) > static_cast<double>(span)) return 0.0;
  return scale * srrc(t, rolloff);
}

PulseShape srrc_taps(double rolloff, int span, int sps) {
  if (!(rolloff >= 0.0 && rolloff <= 1.0)) {
    throw std::invalid_argument("rolloff must lie in [0, 1]");
  }
  if (span < 4) throw std::invalid_argument("SRRC span must be at least 4 symbols");
  if (sps < 4 || sps % 2 != 0) {
    throw std::invalid_argument("samples per symbol must be even and at least 4");
  }
  PulseShape p;
  p.rolloff = rolloff;
  p.span = span;
  p.sps = sps;
  const int half = span * sps;
  p.taps.resize(2 * static_cast<std::size_t>(half) + 1);
  double energy = 0.0;
  for (int n = -half; n <= half; ++n) {
    const double v = srrc(static_cast<double>(n) / sps, rolloff);
    p.taps[static_cast<std::size_t>(n + half)] = v;
    energy += v * v;
  }
  p.scale = 1.0 / std::sqrt(energy);
  for (auto& v : p.taps) v *= p.scale;
  // Enforce exact symmetry.
  for (int n = 1; n <= half; ++n) {
    p.taps[static_cast<std::size_t>(half - n)] = p.taps[static_cast<std::size_t>(half + n)];
  }
  return p;
}

double noise_variance(double es_n0_db) {
  if (std::isinf(es_n0_db) && es_n0_db > 0) return 0.0;
  return 1.0 / (2.0 * std::pow(10.0, es_n0_db / 10.0));
}

ReceivedSignal shape(const SymbolStream& symbols, const PulseShape& pulse, double delay) {
  if (!(std::abs(delay) <= 0.5)) {
    throw std::invalid_argument("channel delay must lie in [-0.5, 0.5] symbol periods");
  }
  const int sps = pulse.sps;
  const int span = pulse.span;
  const std::size_t nsym = symbols.symbols.size();

  ReceivedSignal rx;
  rx.sps = sps;
  rx.true_delay = delay;
  rx.noise_sigma2 = 0.0;
  rx.start_time = -static_cast<double>(span + 2);
  const std::size_t nsamples = (nsym - 1 + 2 * static_cast<std::size_t>(span) + 4) * sps + 1;

  // Delayed pulse on the sample grid: q[n] = p(n / sps - delay), |n| <= P.
  const int P = (span + 1) * sps;
  std::vector<double> reversed(2 * static_cast<std::size_t>(P) + 1);
  for (int n = -P; n <= P; ++n) {
    reversed[static_cast<std::size_t>(P - n)] =
        pulse.value(static_cast<double>(n) / sps - delay);
  }

  // Zero-stuffed symbols, padded by P on both sides: out[m] = sum_j rq[j] s[m + j - P].
  std::vector<cplx> stuffed(nsamples + 2 * static_cast<std::size_t>(P), cplx{});
  const std::size_t first = static_cast<std::size_t>(span + 2) * sps;
  for (std::size_t i = 0; i < nsym; ++i) {
    stuffed[static_cast<std::size_t>(P) + first + i * sps] = symbols.symbols[i];
  }
  rx.samples.resize(nsamples);
  simd::correlate(stuffed, reversed, rx.samples);
  return rx;
}

ReceivedSignal add_noise(ReceivedSignal signal, double es_n0_db, std::uint64_t seed) {
  if (std::isnan(es_n0_db)) throw std::invalid_argument("Es/N0 must not be NaN");
  signal.es_n0_db = es_n0_db;
  signal.noise_sigma2 = noise_variance(es_n0_db);
  if (signal.noise_sigma2 == 0.0) return signal;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(signal.noise_sigma2));
  for (auto& s : signal.samples) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    s += cplx{re, im};
  }
  return signal;
}

MatchedFilterBank::MatchedFilterBank(std::vector<cplx> filtered, int sps, double start_time)
    : y_(std::move(filtered)), sps_(sps), start_(start_time) {
  if (y_.size() < 4) throw std::invalid_argument("matched filter output too short");
}

double MatchedFilterBank::first_time() const { return start_ + 1.0 / sps_; }

double MatchedFilterBank::last_time() const {
  return start_ + static_cast<double>(y_.size() - 3) / sps_;
}

Interpolated MatchedFilterBank::interpolate(double time) const {
  const double pos = (time - start_) * sps_;
  const double base = std::floor(pos);
  if (!(base >= 1.0 && base + 2.0 < static_cast<double>(y_.size()))) {
    throw std::out_of_range("interpolation time " + std::to_string(time) +
                            " outside matched-filter range");
  }
  const auto i = static_cast<std::size_t>(base);
  double w[4];
  double dw[4];
  cubic_weights(pos - base, w, dw);
  cplx v{};
  cplx dv{};
  for (int j = 0; j < 4; ++j) {
    const cplx s = y_[i - 1 + j];
    v += w[j] * s;
    dv += dw[j] * s;
  }
  return {v, dv * static_cast<double>(sps_)};
}

cplx MatchedFilterBank::sample_at(std::size_t k, double u) const {
  return interpolate(static_cast<double>(k) + u).value;
}

Interpolated MatchedFilterBank::evaluate(std::size_t k, double u) const {
  return interpolate(static_cast<double>(k) + u);
}

MatchedFilterBank::Observation MatchedFilterBank::observe(std::size_t k, double u) const {
  if (k == 0) throw std::invalid_argument("differential observable needs k >= 1");
  const auto cur = interpolate(static_cast<double>(k) + u);
  const auto prev = interpolate(static_cast<double>(k - 1) + u);
  return {cur.value * std::conj(prev.value),
          cur.derivative * std::conj(prev.value) + cur.value * std::conj(prev.derivative)};
}

cplx MatchedFilterBank::differential_observable(std::size_t k, double u) const {
  return observe(k, u).z;
}

cplx MatchedFilterBank::observable_derivative(std::size_t k, double u) const {
  return observe(k, u).dz;
}

MatchedFilterBank matched_filter(const ReceivedSignal& received, const PulseShape& pulse) {
  if (received.sps != pulse.sps) {
    throw std::invalid_argument("received sample rate does not match the pulse");
  }
  if (received.samples.size() < pulse.taps.size()) {
    throw std::invalid_argument("received signal shorter than the matched filter");
  }
  std::vector<cplx> y(received.samples.size() - pulse.taps.size() + 1);
  simd::correlate(received.samples, pulse.taps, y);
  const double start =
      received.start_time + static_cast<double>(pulse.half_length()) / received.sps;
  return MatchedFilterBank(std::move(y), received.sps, start);
}

}  // namespace wbansync
