#pragma once

#include <complex>

#include "wbansync/diff_mapper.hpp"

namespace wbansync {

/// Prior log-likelihood ratios oriented toward the positive increment
/// component: re = ln P[Re d > 0] / P[Re d < 0], im likewise. DBPSK uses
/// only `im`. +-infinity encodes a hard prior; zero is the uniform prior.
struct PriorLLRs {
  double re = 0.0;
  double im = 0.0;

  /// From a DBPSK bit LLR ln P[b=1]/P[b=0] (b = 1 <-> d = -j).
  static PriorLLRs from_dbpsk_bit(double llr);
  /// From DQPSK bit LLRs; b_{2k} selects the sign of Im d and b_{2k+1} the sign of Re d.
  static PriorLLRs from_dqpsk_bits(double llr_even, double llr_odd);
};

struct SoftIncrement {
  cplx value;
  double llr_re = 0.0;  // total (prior + observation) LLRs per component
  double llr_im = 0.0;
  Modulation modulation = Modulation::Dbpsk;
};

/// Which hyperbolic tangent the posterior mean uses. The saturating profile
/// replaces tanh(x) by x inside +-threshold and by sign(x) outside.
struct TanhProfile {
  bool saturating = false;
  double threshold = 1.0;
};

double saturating_tanh(double x, double linear_threshold);

/// d~ = j tanh(L / 2) with L = prior.im + 2 Im{z} / sigma2.
/// Throws std::invalid_argument for sigma2 <= 0.
SoftIncrement soft_increment_dbpsk(const PriorLLRs& prior, cplx z, double sigma2,
                                   TanhProfile profile = {});

/// Posterior mean over the pi/4-DQPSK increments with likelihood
/// exp(Re{conj(v) z} / sigma2), in factorized form:
///   Re d~ = (sqrt2/2) tanh(prior.re / 2 + Re{z} / (sqrt2 sigma2)), Im likewise.
SoftIncrement soft_increment_dqpsk(const PriorLLRs& prior, cplx z, double sigma2,
                                   TanhProfile profile = {});

SoftIncrement soft_increment(Modulation m, const PriorLLRs& prior, cplx z, double sigma2,
                             TanhProfile profile = {});

/// P[d = v] for a DQPSK increment from the two bit LLRs
/// lambda_m = ln P[b_m = 1] / P[b_m = 0]; the four values sum to one.
/// Throws std::invalid_argument if `v` is not an alphabet member.
double increment_prior_probability(double llr_even, double llr_odd, cplx v);

}  // namespace wbansync
