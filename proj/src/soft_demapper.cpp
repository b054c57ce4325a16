#include "wbansync/soft_demapper.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wbansync {

namespace {

constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

double squash(double x, const TanhProfile& p) {
  return p.saturating ? saturating_tanh(x, p.threshold) : std::tanh(x);
}

void require_positive(double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("noise variance must be positive");
}

// P[b = 1] from ln P[b=1]/P[b=0], stable for infinite LLRs.
double prob_one(double llr) {
  if (llr >= 0) return 1.0 / (1.0 + std::exp(-llr));
  const double e = std::exp(llr);
  return e / (1.0 + e);
}

}  // namespace

PriorLLRs PriorLLRs::from_dbpsk_bit(double llr) { return {0.0, -llr}; }

PriorLLRs PriorLLRs::from_dqpsk_bits(double llr_even, double llr_odd) {
  return {-llr_odd, -llr_even};
}

double saturating_tanh(double x, double linear_threshold) {
  if (std::abs(x) <= linear_threshold) return x;
  return x > 0 ? 1.0 : -1.0;
}

SoftIncrement soft_increment_dbpsk(const PriorLLRs& prior, cplx z, double sigma2,
                                   TanhProfile profile) {
  require_positive(sigma2);
  SoftIncrement s;
  s.modulation = Modulation::Dbpsk;
  s.llr_im = prior.im + 2.0 * z.imag() / sigma2;
  s.value = cplx{0.0, squash(s.llr_im / 2.0, profile)};
  return s;
}

SoftIncrement soft_increment_dqpsk(const PriorLLRs& prior, cplx z, double sigma2,
                                   TanhProfile profile) {
  require_positive(sigma2);
  SoftIncrement s;
  s.modulation = Modulation::Dqpsk;
  // Each sign flip of one component changes Re{conj(v) z} by sqrt2 * component.
  s.llr_re = prior.re + std::numbers::sqrt2 * z.real() / sigma2;
  s.llr_im = prior.im + std::numbers::sqrt2 * z.imag() / sigma2;
  s.value = kHalfSqrt2 * cplx{squash(s.llr_re / 2.0, profile), squash(s.llr_im / 2.0, profile)};
  return s;
}

SoftIncrement soft_increment(Modulation m, const PriorLLRs& prior, cplx z, double sigma2,
                             TanhProfile profile) {
  return m == Modulation::Dbpsk ? soft_increment_dbpsk(prior, z, sigma2, profile)
                                : soft_increment_dqpsk(prior, z, sigma2, profile);
}

double increment_prior_probability(double llr_even, double llr_odd, cplx v) {
  for (const auto& e : IncrementAlphabet::dqpsk().entries()) {
    if (std::abs(e.increment - v) < 1e-9) {
      const double p0 = prob_one(llr_even);
      const double p1 = prob_one(llr_odd);
      return (e.bits[0] ? p0 : 1.0 - p0) * (e.bits[1] ? p1 : 1.0 - p1);
    }
  }
  throw std::invalid_argument("increment is not a pi/4-DQPSK alphabet member");
}

}  // namespace wbansync
