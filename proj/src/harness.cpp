#include "wbansync/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "wbansync/simd/fir.hpp"

namespace wbansync {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double percentile(std::vector<double>& v, double q) {
  // Linear interpolation between order statistics.
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kPayloadStream = 2;
constexpr std::uint64_t kBootstrapStream = 3;

}  // namespace

void Scenario::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (snr_db.empty() || tau.empty() || modes.empty()) {
    throw std::invalid_argument("snr, tau and mode lists must be non-empty");
  }
  for (double t : tau) {
    if (!(std::abs(t) <= 0.4)) throw std::invalid_argument("tau values must lie in [-0.4, 0.4]");
  }
  for (double s : snr_db) {
    if (std::isnan(s) || s == -std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("SNR values must be finite or +inf");
    }
  }
  if (crb_block_len < 1) throw std::invalid_argument("CRB block length must be at least 1");
  if (bootstrap_resamples < 1) throw std::invalid_argument("bootstrap resamples must be >= 1");
  loop.validate();
  (void)srrc_taps(pulse.rolloff, pulse.span, pulse.sps);
}

std::uint64_t trial_seed(std::uint64_t master_seed, double snr_db, double tau,
                         std::uint64_t trial_index, std::uint64_t stream) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(snr_db));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(tau));
  h = splitmix64(h ^ trial_index);
  return splitmix64(h ^ stream);
}

Channel simulate_channel(const Scenario& scenario, const PulseShape& pulse, double snr_db,
                         double tau, std::size_t trial_index) {
  const auto bits = build_frame_bits(
      scenario.layout, scenario.preamble,
      trial_seed(scenario.master_seed, snr_db, tau, trial_index, kPayloadStream));
  auto symbols = map_stream(bits, scenario.layout);
  auto rx = add_noise(shape(symbols, pulse, tau), snr_db,
                      trial_seed(scenario.master_seed, snr_db, tau, trial_index, kNoiseStream));
  const double sigma2 = std::max(rx.noise_sigma2, kNoiseFreeSigma2);
  return {std::move(symbols), matched_filter(rx, pulse), sigma2};
}

TrialResult run_trial(const Scenario& scenario, const Cell& cell, std::size_t trial_index) {
  const auto pulse = srrc_taps(scenario.pulse.rolloff, scenario.pulse.span, scenario.pulse.sps);
  const auto ch = simulate_channel(scenario, pulse, cell.snr_db, cell.tau, trial_index);
  LoopConfig cfg = scenario.loop;
  cfg.payload_mode = cell.mode;
  TrialResult r{run_loop(ch.bank, scenario.layout, ch.symbols, ch.sigma2, cfg), 0.0};
  r.final_error = r.trajectory.final_estimate() - cell.tau;
  return r;
}

double CellReport::clamp_rate() const {
  if (clamp_events.empty()) return 0.0;
  const auto n = std::count_if(clamp_events.begin(), clamp_events.end(),
                               [](std::size_t c) { return c > 0; });
  return static_cast<double>(n) / static_cast<double>(clamp_events.size());
}

const CellReport* RunReport::find(Mode mode, double snr_db, double tau) const {
  for (const auto& c : cells) {
    if (c.mode == mode && c.snr_db == snr_db && c.tau == tau) return &c;
  }
  return nullptr;
}

Interval bootstrap_mean_ci(std::span<const double> values, std::size_t resamples,
                           std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap of an empty sample");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> stats(resamples);
  for (auto& s : stats) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += values[pick(rng)];
    s = acc / static_cast<double>(values.size());
  }
  return {percentile(stats, 0.025), percentile(stats, 0.975)};
}

double paired_mse_confidence(std::span<const double> a, std::span<const double> b,
                             std::size_t resamples, std::uint64_t seed) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("paired bootstrap needs equal, non-empty samples");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, a.size() - 1);
  std::size_t holds = 0;
  for (std::size_t r = 0; r < resamples; ++r) {
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::size_t j = pick(rng);
      diff += a[j] * a[j] - b[j] * b[j];
    }
    holds += diff <= 0.0 ? 1 : 0;
  }
  return static_cast<double>(holds) / static_cast<double>(resamples);
}

double crb_reference(double snr_db, std::size_t block_len, double rolloff) {
  if (block_len < 1) throw std::invalid_argument("block length must be at least 1");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("SNR must be finite");
  const double es_n0 = std::pow(10.0, snr_db / 10.0);
  return 1.0 / (8.0 * std::numbers::pi * std::numbers::pi * spectral_moment(rolloff) *
                static_cast<double>(block_len) * es_n0);
}

namespace {

struct ModeResults {
  // trials x symbols, row-major; normalized estimation error per symbol.
  std::vector<double> bias_rows;
  std::vector<double> final_errors;
  std::vector<std::size_t> clamp_events;
};

CellReport aggregate(const Scenario& s, Mode mode, double snr, double tau, std::size_t symbols,
                     const ModeResults& r) {
  CellReport c;
  c.mode = mode;
  c.modulation = s.layout.payload_label();
  c.snr_db = snr;
  c.tau = tau;
  c.final_errors = r.final_errors;
  c.clamp_events = r.clamp_events;

  const std::size_t n = s.trials;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = r.final_errors[i] * r.final_errors[i];
  double acc = 0.0;
  for (double v : sq) acc += v;
  c.mse = acc / static_cast<double>(n);
  const std::uint64_t seed = trial_seed(s.master_seed, snr, tau,
                                        static_cast<std::uint64_t>(mode), kBootstrapStream);
  const auto ci = bootstrap_mean_ci(sq, s.bootstrap_resamples, seed);
  c.mse_ci_lo = ci.lo;
  c.mse_ci_hi = ci.hi;
  c.crb = std::isfinite(snr) ? crb_reference(snr, s.crb_block_len, s.pulse.rolloff) : 0.0;

  // Bias curve: shared resample indices across symbols.
  std::vector<double> mean(symbols, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < symbols; ++k) mean[k] += r.bias_rows[t * symbols + k];
  }
  for (auto& m : mean) m /= static_cast<double>(n);

  const std::size_t R = s.bootstrap_resamples;
  std::vector<double> boot(R * symbols, 0.0);
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t b = 0; b < R; ++b) {
    double* row = boot.data() + b * symbols;
    for (std::size_t t = 0; t < n; ++t) {
      const double* src = r.bias_rows.data() + pick(rng) * symbols;
      for (std::size_t k = 0; k < symbols; ++k) row[k] += src[k];
    }
  }
  c.bias.reserve(symbols);
  std::vector<double> column(R);
  for (std::size_t k = 0; k < symbols; ++k) {
    for (std::size_t b = 0; b < R; ++b) column[b] = boot[b * symbols + k] / static_cast<double>(n);
    c.bias.push_back({k + 1, mean[k], percentile(column, 0.025), percentile(column, 0.975)});
  }
  return c;
}

}  // namespace

RunReport monte_carlo(const Scenario& scenario) {
  scenario.validate();
  const auto pulse = srrc_taps(scenario.pulse.rolloff, scenario.pulse.span, scenario.pulse.sps);
  const std::size_t symbols = scenario.layout.total_symbols();
  const std::size_t nmodes = scenario.modes.size();

  RunReport report;
  report.metadata = describe(scenario);
  report.metadata["simd"] = std::string(simd::to_string(simd::active_isa()));

  unsigned workers = scenario.threads ? scenario.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(scenario.trials)));

  for (double snr : scenario.snr_db) {
    for (double tau : scenario.tau) {
      std::vector<ModeResults> results(nmodes);
      for (auto& r : results) {
        r.bias_rows.assign(scenario.trials * symbols, 0.0);
        r.final_errors.assign(scenario.trials, 0.0);
        r.clamp_events.assign(scenario.trials, 0);
      }
      // Each trial writes only its own slots, so the reduction below is
      // independent of scheduling.
      std::atomic<std::size_t> next{0};
      std::vector<std::exception_ptr> failures(workers);
      auto work = [&](unsigned id) {
        try {
          for (std::size_t t = next++; t < scenario.trials; t = next++) {
            const auto ch = simulate_channel(scenario, pulse, snr, tau, t);
            for (std::size_t m = 0; m < nmodes; ++m) {
              LoopConfig cfg = scenario.loop;
              cfg.payload_mode = scenario.modes[m];
              const auto traj = run_loop(ch.bank, scenario.layout, ch.symbols, ch.sigma2, cfg);
              double* row = results[m].bias_rows.data() + t * symbols;
              for (std::size_t k = 0; k < symbols; ++k) row[k] = traj.estimates[k] - tau;
              results[m].final_errors[t] = traj.final_estimate() - tau;
              results[m].clamp_events[t] = traj.clamp_events();
            }
          }
        } catch (...) {
          failures[id] = std::current_exception();
          next = scenario.trials;
        }
      };
      if (workers == 1) {
        work(0);
      } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work, i);
      }
      for (const auto& f : failures) {
        if (f) {
          try {
            std::rethrow_exception(f);
          } catch (const std::exception& e) {
            throw std::runtime_error("cell snr=" + std::to_string(snr) + " tau=" +
                                     std::to_string(tau) + " failed: " + e.what());
          }
        }
      }
      for (std::size_t m = 0; m < nmodes; ++m) {
        report.cells.push_back(aggregate(scenario, scenario.modes[m], snr, tau, symbols, results[m]));
      }
    }
  }
  return report;
}

std::vector<double> s_curve_sweep(const Scenario& scenario, double snr_db, double tau, Mode mode,
                                  std::span<const double> u_grid, std::size_t frames) {
  if (frames < 1) throw std::invalid_argument("s-curve needs at least one frame");
  const auto pulse = srrc_taps(scenario.pulse.rolloff, scenario.pulse.span, scenario.pulse.sps);
  std::vector<double> mean(u_grid.size(), 0.0);
  for (std::size_t f = 0; f < frames; ++f) {
    const auto ch = simulate_channel(scenario, pulse, snr_db, tau, f);
    const auto curve =
        s_curve(ch.bank, scenario.layout, ch.symbols, u_grid, mode, ch.sigma2, scenario.loop.tanh);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += curve[i] / static_cast<double>(frames);
  }
  return mean;
}

}  // namespace wbansync
