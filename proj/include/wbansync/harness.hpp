#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wbansync/frame.hpp"
#include "wbansync/synchronizer.hpp"
#include "wbansync/waveform.hpp"

namespace wbansync {

struct PulseParams {
  double rolloff = 0.3;
  int span = 8;
  int sps = 8;

  bool operator==(const PulseParams&) const = default;
};

struct Scenario {
  std::vector<double> snr_db{10.0};  // +inf disables noise
  std::vector<double> tau{0.1};      // symbol periods
  std::vector<Mode> modes{Mode::DataAided, Mode::NonDataAided, Mode::Soft};
  std::size_t trials = 500;
  std::uint64_t master_seed = 20140301;
  FrameLayout layout = FrameLayout::standard();
  PreambleConfig preamble;
  PulseParams pulse;
  LoopConfig loop;  // payload_mode is overridden per cell
  std::size_t crb_block_len = 100;
  std::size_t bootstrap_resamples = 1000;
  unsigned threads = 0;  // 0: hardware concurrency

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct Cell {
  Mode mode = Mode::Soft;
  double snr_db = 10.0;
  double tau = 0.1;
};

/// Channel realization shared by every mode of one (snr, tau, trial) triple.
struct Channel {
  SymbolStream symbols;
  MatchedFilterBank bank;
  double sigma2;  // noise variance handed to the demapper
};

/// Smallest noise variance the demapper sees; noise-free cells use it.
inline constexpr double kNoiseFreeSigma2 = 1e-9;

/// splitmix64-based mix of the master seed, the channel cell and the trial.
std::uint64_t trial_seed(std::uint64_t master_seed, double snr_db, double tau,
                         std::uint64_t trial_index, std::uint64_t stream);

Channel simulate_channel(const Scenario& scenario, const PulseShape& pulse, double snr_db,
                         double tau, std::size_t trial_index);

struct TrialResult {
  TimingTrajectory trajectory;
  double final_error;  // (tau_hat_final - tau) / T
};

TrialResult run_trial(const Scenario& scenario, const Cell& cell, std::size_t trial_index);

struct BiasPoint {
  std::size_t symbol_index;
  double mean;
  double ci_lo;
  double ci_hi;

  bool operator==(const BiasPoint&) const = default;
};

struct CellReport {
  Mode mode = Mode::Soft;
  std::string modulation;
  double snr_db = 0.0;
  double tau = 0.0;
  double mse = 0.0;
  double mse_ci_lo = 0.0;
  double mse_ci_hi = 0.0;
  double crb = 0.0;
  std::vector<BiasPoint> bias;
  std::vector<double> final_errors;        // one per trial, trial order
  std::vector<std::size_t> clamp_events;   // one per trial

  std::size_t trials() const { return final_errors.size(); }
  /// Fraction of trials with at least one clamp event.
  double clamp_rate() const;

  bool operator==(const CellReport&) const = default;
};

struct RunReport {
  std::vector<CellReport> cells;
  std::map<std::string, std::string> metadata;

  const CellReport* find(Mode mode, double snr_db, double tau) const;

  bool operator==(const RunReport&) const = default;
};

RunReport monte_carlo(const Scenario& scenario);

/// s_curve() averaged over `frames` channel realizations of the scenario layout.
std::vector<double> s_curve_sweep(const Scenario& scenario, double snr_db, double tau, Mode mode,
                                  std::span<const double> u_grid, std::size_t frames);

struct Interval {
  double lo;
  double hi;
};

/// Percentile bootstrap 95% interval of the mean of `values`.
Interval bootstrap_mean_ci(std::span<const double> values, std::size_t resamples,
                           std::uint64_t seed);

/// Fraction of paired bootstrap resamples (trial indices shared) in which
/// mean(a^2) <= mean(b^2). Throws std::invalid_argument on a size mismatch.
double paired_mse_confidence(std::span<const double> a, std::span<const double> b,
                             std::size_t resamples, std::uint64_t seed);

/// Data-aided timing bound 1 / (8 pi^2 xi L Es/N0) in (tau/T)^2 units.
double crb_reference(double snr_db, std::size_t block_len, double rolloff);

enum class ReportFormat { Csv, Json };

/// CSV writes curves.csv, summary.csv and trials.csv into `dir`; JSON writes
/// report.json. Throws std::runtime_error naming the path on I/O failure.
void emit_report(const RunReport& report, const std::filesystem::path& dir, ReportFormat format);

/// Inverse of emit_report. CSV output carries no metadata.
RunReport load_report(const std::filesystem::path& dir, ReportFormat format);

inline constexpr const char* kCurvesHeader =
    "mode,modulation,snr_db,tau_over_t,symbol_index,bias_mean,bias_ci_lo,bias_ci_hi";
inline constexpr const char* kSummaryHeader =
    "mode,modulation,snr_db,tau_over_t,mse,mse_ci_lo,mse_ci_hi,crb";
inline constexpr const char* kTrialsHeader =
    "mode,modulation,snr_db,tau_over_t,trial,final_error,clamp_events";

/// Flat `key = value` configuration; '#' starts a comment. Lists are comma
/// separated. Throws std::invalid_argument on unknown keys or bad values.
void apply_config_value(Scenario& scenario, const std::string& key, const std::string& value);
Scenario load_scenario(const std::filesystem::path& path, Scenario base = {});
std::map<std::string, std::string> describe(const Scenario& scenario);

}  // namespace wbansync
