#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "wbansync/diff_mapper.hpp"
#include "wbansync/waveform.hpp"

using namespace wbansync;

namespace {

constexpr double kPi = std::numbers::pi;

// Raised-cosine energy spectrum |H(f)|^2 for unit symbol period.
double rc_spectrum(double f, double a) {
  f = std::abs(f);
  const double lo = (1.0 - a) / 2.0;
  const double hi = (1.0 + a) / 2.0;
  if (f <= lo) return 1.0;
  if (f >= hi) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi / a * (f - lo)));
}

template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double xi_quadrature(double a) {
  const double top = (1.0 + a) / 2.0;
  const double num = simpson([&](double f) { return f * f * rc_spectrum(f, a); }, -top, top, 20000);
  const double den = simpson([&](double f) { return rc_spectrum(f, a); }, -top, top, 20000);
  return num / den;
}

SymbolStream random_stream(std::size_t n, Modulation m, std::uint64_t seed) {
  const FrameLayout L({{RegionKind::Psdu, n, m}});
  return map_stream(build_frame_bits(L, PreambleConfig{}, seed), L);
}

MatchedFilterBank noise_free_bank(const SymbolStream& s, const PulseShape& p, double tau) {
  return matched_filter(shape(s, p, tau), p);
}

}  // namespace

TEST_CASE("srrc singular points use their limits") {
  for (double a : {0.1, 0.3, 0.5, 1.0}) {
    const double ts = 1.0 / (4.0 * a);
    CHECK(srrc(ts, a) == doctest::Approx(srrc(ts + 1e-6, a)).epsilon(1e-4));
    CHECK(srrc(-ts, a) == doctest::Approx(srrc(-ts - 1e-6, a)).epsilon(1e-4));
    CHECK(srrc(0.0, a) == doctest::Approx(srrc(1e-7, a)).epsilon(1e-6));
  }
  CHECK(srrc(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(srrc(0.5, 0.0) == doctest::Approx(std::sin(kPi * 0.5) / (kPi * 0.5)));
}

TEST_CASE("srrc taps: unit energy, symmetry, Nyquist") {
  const auto p = srrc_taps(0.3, 8, 8);
  REQUIRE(p.taps.size() == 129);
  const double e = std::inner_product(p.taps.begin(), p.taps.end(), p.taps.begin(), 0.0);
  CHECK(std::abs(e - 1.0) < 1e-9);
  for (std::size_t i = 0; i < p.taps.size(); ++i) {
    CHECK(std::abs(p.taps[i] - p.taps[p.taps.size() - 1 - i]) < 1e-12);
  }
  const int n = static_cast<int>(p.taps.size());
  for (int m = 1; m <= p.span; ++m) {
    double g = 0.0;
    for (int i = m * p.sps; i < n; ++i) g += p.taps[i] * p.taps[i - m * p.sps];
    CHECK(std::abs(g) < 2e-2);
  }
  CHECK(p.value(0.0) == doctest::Approx(p.taps[p.half_length()]));
  CHECK(p.value(8.01) == 0.0);
  CHECK_THROWS_AS(srrc_taps(1.2, 8, 8), std::invalid_argument);
  CHECK_THROWS_AS(srrc_taps(0.3, 3, 8), std::invalid_argument);
  CHECK_THROWS_AS(srrc_taps(0.3, 8, 7), std::invalid_argument);
}

TEST_CASE("spectral moment closed form against quadrature") {
  for (double a : {0.0, 0.1, 0.3, 0.5, 0.8, 1.0}) {
    const double q = a == 0.0 ? 1.0 / 12.0 : xi_quadrature(a);
    CHECK(std::abs(spectral_moment(a) - q) <= 1e-4 * q);
  }
  CHECK(spectral_moment(0.3) == doctest::Approx(0.08760).epsilon(1e-4));
}

TEST_CASE("spectral moment of the tap DFT") {
  const auto p = srrc_taps(0.3, 16, 8);
  const int half = static_cast<int>(p.half_length());
  // f in cycles per symbol period over the full sampled band.
  auto power = [&](double f) {
    cplx acc{};
    for (int n = -half; n <= half; ++n) {
      acc += p.taps[static_cast<std::size_t>(n + half)] *
             std::polar(1.0, -2.0 * kPi * f * n / p.sps);
    }
    return std::norm(acc);
  };
  const double band = p.sps / 2.0;
  const double num = simpson([&](double f) { return f * f * power(f); }, -band, band, 4000);
  const double den = simpson(power, -band, band, 4000);
  CHECK(num / den == doctest::Approx(spectral_moment(0.3)).epsilon(2e-3));
}

TEST_CASE("shape: single symbol reproduces the taps") {
  const auto p = srrc_taps(0.3, 8, 8);
  SymbolStream s;
  s.symbols = {cplx{0, 1}};
  s.increments = {cplx{1, 0}};
  const auto rx = shape(s, p, 0.0);
  const std::size_t centre = static_cast<std::size_t>(p.span + 2) * p.sps;
  for (std::size_t m = 0; m < rx.samples.size(); ++m) {
    const long n = static_cast<long>(m) - static_cast<long>(centre) + static_cast<long>(p.half_length());
    const double want = (n >= 0 && n < static_cast<long>(p.taps.size())) ? p.taps[static_cast<std::size_t>(n)] : 0.0;
    CHECK(std::abs(rx.samples[m] - cplx{0, want}) < 1e-12);
  }
}

TEST_CASE("shape: delay is an exact time shift") {
  const auto p = srrc_taps(0.3, 8, 8);
  const auto s = random_stream(30, Modulation::Dqpsk, 4);
  const auto rx = shape(s, p, 0.25);
  for (std::size_t m = 0; m < rx.samples.size(); ++m) {
    const double t = rx.start_time + static_cast<double>(m) / p.sps;
    cplx want{};
    for (std::size_t i = 0; i < s.symbols.size(); ++i) {
      want += s.symbols[i] * p.value(t - 0.25 - static_cast<double>(i));
    }
    CHECK(std::abs(rx.samples[m] - want) < 1e-12);
  }
  CHECK_THROWS_AS(shape(s, p, 0.51), std::invalid_argument);
}

TEST_CASE("shape: frame energy") {
  const auto p = srrc_taps(0.3, 8, 8);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = random_stream(200, seed % 2 ? Modulation::Dqpsk : Modulation::Dbpsk, seed);
    const auto rx = shape(s, p, 0.1);
    double e = 0.0;
    for (const auto& v : rx.samples) e += std::norm(v);
    CHECK(std::abs(e / static_cast<double>(s.symbols.size()) - 1.0) < 0.05);
  }
}

TEST_CASE("noise: off, deterministic, calibrated") {
  const auto p = srrc_taps(0.3, 8, 8);
  const auto s = random_stream(20, Modulation::Dbpsk, 1);
  const auto rx = shape(s, p, 0.0);
  CHECK(add_noise(rx, std::numeric_limits<double>::infinity(), 9).samples == rx.samples);
  CHECK(add_noise(rx, 5.0, 9).samples == add_noise(rx, 5.0, 9).samples);
  CHECK(add_noise(rx, 5.0, 9).samples != add_noise(rx, 5.0, 10).samples);
  CHECK(noise_variance(10.0) == doctest::Approx(0.05));
  CHECK(noise_variance(0.0) == doctest::Approx(0.5));

  ReceivedSignal silent;
  silent.sps = 8;
  silent.samples.assign(800'200, cplx{});
  const double es_n0 = 3.0;
  const auto noisy = add_noise(silent, es_n0, 42);
  CHECK(noisy.noise_sigma2 == doctest::Approx(noise_variance(es_n0)));
  const auto bank = matched_filter(noisy, p);
  double re = 0.0, im = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < bank.samples().size(); i += 8, ++n) {
    re += bank.samples()[i].real() * bank.samples()[i].real();
    im += bank.samples()[i].imag() * bank.samples()[i].imag();
  }
  REQUIRE(n >= 100'000);
  const double s2 = noise_variance(es_n0);
  CHECK(std::abs(re / n / s2 - 1.0) < 0.03);
  CHECK(std::abs(im / n / s2 - 1.0) < 0.03);

  double all = 0.0;
  for (const auto& v : bank.samples()) all += std::norm(v);
  CHECK(std::abs(all / (2.0 * bank.samples().size()) / s2 - 1.0) < 0.05);
}

TEST_CASE("matched filter recovers the symbols at the true delay") {
  const auto p = srrc_taps(0.3, 8, 8);
  for (double tau : {0.0, 0.1, -0.3, 0.4}) {
    const auto s = random_stream(120, Modulation::Dqpsk, 2);
    const auto bank = noise_free_bank(s, p, tau);
    for (std::size_t k = 10; k + 10 < s.symbols.size(); ++k) {
      CHECK(std::abs(bank.sample_at(k, tau) - s.symbols[k]) < 2e-2);
      CHECK(std::abs(bank.differential_observable(k, tau) - s.increments[k]) < 5e-2);
    }
  }
}

TEST_CASE("interpolator reproduces knots and tones") {
  std::vector<cplx> y(400);
  const double f = 0.05;  // cycles per sample
  for (std::size_t n = 0; n < y.size(); ++n) y[n] = std::polar(1.0, 2.0 * kPi * f * static_cast<double>(n));
  const MatchedFilterBank bank(y, 8, 0.0);
  for (std::size_t k = 2; k < 45; ++k) {
    for (int q = -3; q <= 3; ++q) {
      const double u = q / 8.0;
      CHECK(bank.sample_at(k, u) == y[k * 8 + q]);
    }
    for (double u : {-0.43, -0.21, 0.0371, 0.19, 0.33}) {
      const double pos = (static_cast<double>(k) + u) * 8.0;
      const cplx want = std::polar(1.0, 2.0 * kPi * f * pos);
      CHECK(std::abs(bank.sample_at(k, u) - want) < 1e-3);
    }
  }
  CHECK_THROWS_AS(bank.sample_at(0, 0.0), std::out_of_range);
  CHECK_THROWS_AS(bank.sample_at(50, 0.0), std::out_of_range);
}

TEST_CASE("interpolator is linear") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<cplx> a(200), b(200), sum(200);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = {g(rng), g(rng)};
    b[i] = {g(rng), g(rng)};
    sum[i] = a[i] + b[i];
  }
  const MatchedFilterBank A(a, 8, 0.0), B(b, 8, 0.0), S(sum, 8, 0.0);
  std::uniform_real_distribution<double> uu(-0.5, 0.5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(t % 20);
    const double u = uu(rng);
    CHECK(std::abs(S.sample_at(k, u) - A.sample_at(k, u) - B.sample_at(k, u)) < 1e-12);
  }
}

TEST_CASE("interpolator derivative matches central differences") {
  const auto p = srrc_taps(0.3, 8, 8);
  const auto s = random_stream(60, Modulation::Dqpsk, 8);
  const auto bank = noise_free_bank(s, p, 0.17);
  const double eps = 1e-4;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uu(-0.45, 0.45);
  int tested = 0;
  for (int t = 0; t < 2000; ++t) {
    const std::size_t k = 5 + static_cast<std::size_t>(t % 50);
    const double u = uu(rng);
    const double frac = (u * 8.0) - std::floor(u * 8.0);
    if (frac < 0.01 || frac > 0.99) continue;  // stay off the knots
    const auto ev = bank.evaluate(k, u);
    const cplx fd = (bank.sample_at(k, u + eps) - bank.sample_at(k, u - eps)) / (2 * eps);
    if (std::abs(ev.derivative) < 1e-2) continue;
    CHECK(std::abs(fd - ev.derivative) <= 1e-3 * std::abs(ev.derivative));

    const cplx dz = bank.observable_derivative(k, u);
    const cplx fdz = (bank.differential_observable(k, u + eps) - bank.differential_observable(k, u - eps)) / (2 * eps);
    if (std::abs(dz) > 1e-2) CHECK(std::abs(fdz - dz) <= 1e-3 * std::abs(dz));
    ++tested;
  }
  CHECK(tested > 1000);
}

TEST_CASE("differential observable properties") {
  const MatchedFilterBank flat(std::vector<cplx>(200, cplx{0.3, -0.7}), 8, 0.0);
  for (std::size_t k = 2; k < 20; ++k) {
    const cplx z = flat.differential_observable(k, 0.123);
    CHECK(std::abs(z.imag()) < 1e-15);
    CHECK(z.real() >= 0.0);
    CHECK(std::abs(flat.observable_derivative(k, 0.123)) < 1e-12);
    CHECK(std::abs(flat.evaluate(k, -0.3).derivative) < 1e-12);
  }
  CHECK_THROWS_AS(flat.differential_observable(0, 0.0), std::invalid_argument);

  const auto p = srrc_taps(0.3, 8, 8);
  const auto bank = noise_free_bank(random_stream(40, Modulation::Dbpsk, 3), p, 0.2);
  for (std::size_t k = 5; k < 35; ++k) {
    const cplx z = bank.differential_observable(k, 0.1);
    const cplx swapped = bank.sample_at(k - 1, 0.1) * std::conj(bank.sample_at(k, 0.1));
    CHECK(std::abs(swapped - std::conj(z)) < 1e-14);
    const auto o = bank.observe(k, 0.1);
    CHECK(o.z == z);
    CHECK(o.dz == bank.observable_derivative(k, 0.1));
  }
}

TEST_CASE("S-curve null and timing identity on noise-free frames") {
  const auto p = srrc_taps(0.3, 8, 8);
  for (double tau : {-0.4, -0.2, 0.0, 0.1, 0.3, 0.4}) {
    const auto s = random_stream(200, Modulation::Dbpsk, 17);
    const auto bank = noise_free_bank(s, p, tau);
    double null = 0.0;
    for (std::size_t k = 1; k <= 200; ++k) {
      null += (std::conj(s.increments[k]) * bank.observable_derivative(k, tau)).real();
    }
    CHECK(std::abs(null / 200.0) < 0.05);

    double best = -1e300, arg = 0.0;
    for (double u = tau - 0.1; u <= tau + 0.1; u += 0.001) {
      double m = 0.0;
      for (std::size_t k = 1; k <= 200; ++k) {
        m += (std::conj(s.increments[k]) * bank.differential_observable(k, u)).real();
      }
      if (m > best) {
        best = m;
        arg = u;
      }
    }
    CHECK(std::abs(arg - tau) < 0.01);
  }
}
