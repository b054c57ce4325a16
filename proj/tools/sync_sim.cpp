// sync-sim: Monte-Carlo timing-recovery experiments on narrowband WBAN frames.
//
//   sync-sim run    --config scenario.cfg [overrides] --out results --format csv
//   sync-sim scurve --tau 0.1 --mode da,nda,soft --snr-db 5
//   sync-sim crb    --snr-db 0,5,10 --block-len 100 --rolloff 0.3
//
// Exit codes: 0 success, 1 invalid configuration, 2 runtime failure.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wbansync/harness.hpp"
#include "wbansync/simd/fir.hpp"

namespace {

using namespace wbansync;

constexpr int kExitInvalidConfig = 1;
constexpr int kExitRuntime = 2;

// Shortest round-trip representation.
std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct InvalidConfig : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunOptions {
  std::string config;
  std::optional<std::string> snr_db, tau, mode, layout, format_name;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> mu, rolloff;
  std::optional<int> sps;
  std::optional<unsigned> threads;
  std::string out = "results";
  bool lowcomplexity = false;
};

Scenario build_scenario(const RunOptions& o) {
  try {
    Scenario s;
    // MSE experiments default to the 100-symbol block.
    s.layout = FrameLayout::block(Modulation::Dbpsk);
    if (!o.config.empty()) s = load_scenario(o.config, s);
    auto set = [&](const char* key, const std::optional<std::string>& v) {
      if (v) apply_config_value(s, key, *v);
    };
    set("snr_db", o.snr_db);
    set("tau", o.tau);
    set("modes", o.mode);
    set("layout", o.layout);
    if (o.trials) s.trials = *o.trials;
    if (o.seed) s.master_seed = *o.seed;
    if (o.mu) s.loop.step_size = *o.mu;
    if (o.rolloff) s.pulse.rolloff = *o.rolloff;
    if (o.sps) s.pulse.sps = *o.sps;
    if (o.threads) s.threads = *o.threads;
    if (o.lowcomplexity) s.loop.tanh.saturating = true;
    s.validate();
    return s;
  } catch (const std::invalid_argument& e) {
    throw InvalidConfig(e.what());
  }
}

ReportFormat parse_format(const std::string& f) {
  if (f == "csv") return ReportFormat::Csv;
  if (f == "json") return ReportFormat::Json;
  throw InvalidConfig("unknown format '" + f + "' (expected csv|json)");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  Scenario tmp;
  apply_config_value(tmp, key, text);
  return key == "snr_db" ? tmp.snr_db : tmp.tau;
}

int cmd_run(const RunOptions& o) {
  const Scenario s = build_scenario(o);
  const ReportFormat format = parse_format(o.format_name.value_or("csv"));
  const RunReport report = monte_carlo(s);
  emit_report(report, o.out, format);
  std::printf("%-5s %-12s %8s %6s %12s %12s %12s %12s\n", "mode", "modulation", "snr_db", "tau",
              "mse", "ci_lo", "ci_hi", "crb");
  for (const auto& c : report.cells) {
    std::printf("%-5s %-12s %8g %6g %12.4g %12.4g %12.4g %12.4g\n",
                std::string(to_string(c.mode)).c_str(), c.modulation.c_str(), c.snr_db, c.tau,
                c.mse, c.mse_ci_lo, c.mse_ci_hi, c.crb);
  }
  std::printf("wrote %s report to %s (simd: %s)\n", format == ReportFormat::Csv ? "csv" : "json",
              o.out.c_str(), std::string(simd::to_string(simd::active_isa())).c_str());
  return 0;
}

struct ScurveOptions {
  RunOptions base;
  double snr_db = std::numeric_limits<double>::infinity();
  double tau = 0.1;
  double half_width = 0.25;
  std::size_t points = 51;
  std::size_t frames = 20;
  std::string out;
};

int cmd_scurve(const ScurveOptions& o) {
  RunOptions ro = o.base;
  ro.tau = num(o.tau);
  if (!ro.layout) ro.layout = "standard";
  const Scenario s = build_scenario(ro);
  if (o.points < 2 || !(o.half_width > 0.0) || std::abs(o.tau) + o.half_width > 0.5 + 1e-12) {
    throw InvalidConfig("s-curve grid must have >= 2 points and stay within +-0.5T of zero");
  }
  if (o.frames < 1) throw InvalidConfig("frames must be at least 1");
  std::vector<double> grid(o.points);
  for (std::size_t i = 0; i < o.points; ++i) {
    grid[i] = o.tau - o.half_width + 2.0 * o.half_width * static_cast<double>(i) /
                                         static_cast<double>(o.points - 1);
  }
  std::FILE* out = stdout;
  if (!o.out.empty()) {
    out = std::fopen(o.out.c_str(), "w");
    if (!out) throw std::runtime_error("cannot write " + o.out);
  }
  std::fprintf(out, "mode,snr_db,tau_over_t,u_over_t,mean_error\n");
  for (Mode m : s.modes) {
    const auto curve = s_curve_sweep(s, o.snr_db, o.tau, m, grid, o.frames);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::fprintf(out, "%s,%s,%s,%s,%s\n", std::string(to_string(m)).c_str(), num(o.snr_db).c_str(),
                   num(o.tau).c_str(), num(grid[i]).c_str(), num(curve[i]).c_str());
    }
  }
  if (out != stdout) std::fclose(out);
  return 0;
}

int cmd_crb(const std::string& snr_list, std::size_t block_len, double rolloff) {
  std::vector<double> snrs;
  try {
    snrs = parse_list("snr_db", snr_list);
    if (block_len < 1) throw std::invalid_argument("block length must be at least 1");
    if (!(rolloff >= 0.0 && rolloff <= 1.0)) throw std::invalid_argument("rolloff must lie in [0, 1]");
    for (double s : snrs) {
      if (!std::isfinite(s)) throw std::invalid_argument("CRB needs finite SNR values");
    }
  } catch (const std::invalid_argument& e) {
    throw InvalidConfig(e.what());
  }
  std::printf("snr_db,block_len,rolloff,crb\n");
  for (double s : snrs) {
    std::printf("%s,%zu,%s,%s\n", num(s).c_str(), block_len, num(rolloff).c_str(),
                num(crb_reference(s, block_len, rolloff)).c_str());
  }
  return 0;
}

void add_scenario_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config", o.config, "flat key = value scenario file")->check(CLI::ExistingFile);
  cmd->add_option("--snr-db", o.snr_db, "comma-separated Es/N0 values in dB (inf = noise off)");
  cmd->add_option("--tau", o.tau, "comma-separated channel delays in symbol periods");
  cmd->add_option("--mode", o.mode, "comma-separated payload modes: da,nda,soft");
  cmd->add_option("--layout", o.layout, "standard | block-dbpsk[:N] | block-dqpsk[:N] | explicit regions");
  cmd->add_option("--trials", o.trials, "Monte-Carlo trials per cell");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--mu", o.mu, "loop step size");
  cmd->add_option("--rolloff", o.rolloff, "SRRC roll-off factor");
  cmd->add_option("--sps", o.sps, "samples per symbol");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  cmd->add_flag("--lowcomplexity-tanh", o.lowcomplexity, "use the saturating tanh approximation");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive ML symbol-timing recovery simulator for IEEE 802.15.6 narrowband frames"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Monte-Carlo bias/MSE sweep");
  add_scenario_options(run_cmd, run);
  run_cmd->add_option("--out", run.out, "output directory");
  run_cmd->add_option("--format", run.format_name, "csv | json");

  ScurveOptions sc;
  auto* sc_cmd = app.add_subcommand("scurve", "mean detector output versus timing hypothesis");
  add_scenario_options(sc_cmd, sc.base);
  sc_cmd->remove_option(sc_cmd->get_option("--snr-db"));
  sc_cmd->remove_option(sc_cmd->get_option("--tau"));
  sc_cmd->add_option("--snr-db", sc.snr_db, "Es/N0 in dB (default: noise off)");
  sc_cmd->add_option("--tau", sc.tau, "channel delay in symbol periods");
  sc_cmd->add_option("--half-width", sc.half_width, "grid half width around tau, symbol periods");
  sc_cmd->add_option("--points", sc.points, "grid points");
  sc_cmd->add_option("--frames", sc.frames, "frames averaged per point");
  sc_cmd->add_option("--out", sc.out, "CSV output file (default stdout)");

  std::string crb_snr = "0,5,10,15,20";
  std::size_t block_len = 100;
  double rolloff = 0.3;
  auto* crb_cmd = app.add_subcommand("crb", "data-aided timing Cramer-Rao bound");
  crb_cmd->add_option("--snr-db", crb_snr, "comma-separated Es/N0 values in dB");
  crb_cmd->add_option("--block-len", block_len, "observation length in symbols");
  crb_cmd->add_option("--rolloff", rolloff, "SRRC roll-off factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*sc_cmd) return cmd_scurve(sc);
    if (*crb_cmd) return cmd_crb(crb_snr, block_len, rolloff);
  } catch (const InvalidConfig& e) {
    std::cerr << "sync-sim: invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "sync-sim: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
