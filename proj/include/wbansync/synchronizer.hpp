#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "wbansync/frame.hpp"
#include "wbansync/soft_demapper.hpp"
#include "wbansync/waveform.hpp"

namespace wbansync {

enum class Mode { DataAided, NonDataAided, Soft };

std::string_view to_string(Mode mode);
/// Accepts "da", "nda", "soft" (case-insensitive).
Mode parse_mode(std::string_view text);

struct LoopConfig {
  static constexpr double kDefaultStepSize = 0.005;

  double step_size = kDefaultStepSize;  // symbol periods per unit detector output
  double initial_estimate = 0.0;        // symbol periods
  Mode payload_mode = Mode::Soft;       // preamble regions always run data-aided
  double clamp = 0.5;
  TanhProfile tanh;
  /// Optional per-symbol priors for the soft demapper (index k as in run_loop);
  /// empty means uniform.
  std::vector<PriorLLRs> priors;

  /// Throws std::invalid_argument unless 0 < step_size <= 1, |initial| <= clamp, 0 < clamp <= 0.5.
  void validate() const;
};

struct TimingTrajectory {
  double initial_estimate = 0.0;
  // One entry per processed symbol k = 1 .. N; entry i belongs to k = i + 1.
  std::vector<double> estimates;  // tau_hat_k after the update
  std::vector<double> errors;     // e_k
  std::vector<Mode> modes;
  std::vector<std::uint8_t> clamped;

  std::size_t size() const { return estimates.size(); }
  double final_estimate() const { return estimates.empty() ? initial_estimate : estimates.back(); }
  std::size_t clamp_events() const;

  bool operator==(const TimingTrajectory&) const = default;
};

/// MLD output e = Re{conj(d) dz}.
double timing_error(cplx d, cplx dz);

struct StepResult {
  double estimate;
  bool clamped;
};

/// clamp(previous + mu * error, -clamp, clamp).
StepResult step(double previous, double error, const LoopConfig& config);

/// Mode used for symbol k (1-based increment index) given the region map.
Mode mode_for(std::size_t k, const FrameLayout& layout, Mode payload_mode);

/// Increment estimate fed to the detector at symbol k for the given mode.
cplx increment_estimate(Mode mode, Modulation modulation, cplx z, cplx truth, double sigma2,
                        const PriorLLRs& prior, TanhProfile profile);

/// Runs the adaptive loop over k = 1 .. N. `truth` is only read in
/// data-aided symbols. Throws std::invalid_argument for sigma2 <= 0 or a
/// layout that disagrees with `truth`.
TimingTrajectory run_loop(const MatchedFilterBank& bank, const FrameLayout& layout,
                          const SymbolStream& truth, double sigma2, const LoopConfig& config);

/// Mean detector output over all frame symbols at each fixed hypothesis u in
/// `u_grid`, with every symbol using `mode` (data-aided uses truth throughout).
std::vector<double> s_curve(const MatchedFilterBank& bank, const FrameLayout& layout,
                            const SymbolStream& truth, std::span<const double> u_grid, Mode mode,
                            double sigma2, TanhProfile profile = {});

}  // namespace wbansync
