#include "wbansync/synchronizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wbansync {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::DataAided: return "da";
    case Mode::NonDataAided: return "nda";
    case Mode::Soft: return "soft";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  std::string t(text);
  for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "da") return Mode::DataAided;
  if (t == "nda") return Mode::NonDataAided;
  if (t == "soft") return Mode::Soft;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected da|nda|soft)");
}

void LoopConfig::validate() const {
  if (!(step_size > 0.0 && step_size <= 1.0)) {
    throw std::invalid_argument("step size must lie in (0, 1]");
  }
  if (!(clamp > 0.0 && clamp <= 0.5)) throw std::invalid_argument("clamp must lie in (0, 0.5]");
  if (!(std::abs(initial_estimate) <= clamp)) {
    throw std::invalid_argument("initial estimate outside the clamp range");
  }
  if (tanh.saturating && !(tanh.threshold > 0.0)) {
    throw std::invalid_argument("tanh linear threshold must be positive");
  }
}

std::size_t TimingTrajectory::clamp_events() const {
  return static_cast<std::size_t>(std::count(clamped.begin(), clamped.end(), 1));
}

double timing_error(cplx d, cplx dz) { return (std::conj(d) * dz).real(); }

StepResult step(double previous, double error, const LoopConfig& config) {
  const double raw = previous + config.step_size * error;
  const double c = std::clamp(raw, -config.clamp, config.clamp);
  return {c, c != raw};
}

Mode mode_for(std::size_t k, const FrameLayout& layout, Mode payload_mode) {
  return region_of(k - 1, layout).kind == RegionKind::Preamble ? Mode::DataAided : payload_mode;
}

cplx increment_estimate(Mode mode, Modulation modulation, cplx z, cplx truth, double sigma2,
                        const PriorLLRs& prior, TanhProfile profile) {
  switch (mode) {
    case Mode::DataAided: return truth;
    case Mode::NonDataAided: return hard_demap(modulation, z).increment;
    case Mode::Soft: return soft_increment(modulation, prior, z, sigma2, profile).value;
  }
  return {};
}

namespace {

void check_inputs(const FrameLayout& layout, const SymbolStream& truth, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("noise variance must be positive");
  if (truth.increments.size() != layout.total_symbols() + 1) {
    throw std::invalid_argument("symbol stream has " + std::to_string(truth.frame_symbols()) +
                                " increments, layout has " +
                                std::to_string(layout.total_symbols()));
  }
}

}  // namespace

TimingTrajectory run_loop(const MatchedFilterBank& bank, const FrameLayout& layout,
                          const SymbolStream& truth, double sigma2, const LoopConfig& config) {
  config.validate();
  check_inputs(layout, truth, sigma2);
  const std::size_t n = layout.total_symbols();
  if (bank.first_time() > -config.clamp || bank.last_time() < static_cast<double>(n) + config.clamp) {
    throw std::invalid_argument("matched-filter bank does not cover the frame");
  }
  if (!config.priors.empty() && config.priors.size() != n + 1) {
    throw std::invalid_argument("prior list must have one entry per symbol index 0..N");
  }

  TimingTrajectory traj;
  traj.initial_estimate = config.initial_estimate;
  traj.estimates.reserve(n);
  traj.errors.reserve(n);
  traj.modes.reserve(n);
  traj.clamped.reserve(n);

  double tau_hat = config.initial_estimate;
  for (std::size_t k = 1; k <= n; ++k) {
    const auto region = region_of(k - 1, layout);
    const Mode mode = region.kind == RegionKind::Preamble ? Mode::DataAided : config.payload_mode;
    const auto obs = bank.observe(k, tau_hat);
    const PriorLLRs prior = config.priors.empty() ? PriorLLRs{} : config.priors[k];
    const cplx d = increment_estimate(mode, region.modulation, obs.z, truth.increments[k], sigma2,
                                      prior, config.tanh);
    const double e = timing_error(d, obs.dz);
    const auto next = step(tau_hat, e, config);
    tau_hat = next.estimate;
    traj.estimates.push_back(tau_hat);
    traj.errors.push_back(e);
    traj.modes.push_back(mode);
    traj.clamped.push_back(next.clamped ? 1 : 0);
  }
  return traj;
}

std::vector<double> s_curve(const MatchedFilterBank& bank, const FrameLayout& layout,
                            const SymbolStream& truth, std::span<const double> u_grid, Mode mode,
                            double sigma2, TanhProfile profile) {
  check_inputs(layout, truth, sigma2);
  const std::size_t n = layout.total_symbols();
  std::vector<double> out;
  out.reserve(u_grid.size());
  for (double u : u_grid) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const auto obs = bank.observe(k, u);
      const Modulation m = region_of(k - 1, layout).modulation;
      acc += timing_error(increment_estimate(mode, m, obs.z, truth.increments[k], sigma2, {}, profile),
                          obs.dz);
    }
    out.push_back(acc / static_cast<double>(n));
  }
  return out;
}

}  // namespace wbansync
