#include <doctest.h>

#include <unistd.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "wbansync/harness.hpp"

namespace fs = std::filesystem;
using namespace wbansync;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SYNC_SIM_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path temp(const std::string& name) {
  return fs::temp_directory_path() / ("wbansync_cli_" + name + "_" + std::to_string(::getpid()));
}

}  // namespace

TEST_CASE("run writes a report and CLI overrides the config") {
  const auto cfg = temp("cfg");
  const auto out = temp("out");
  std::ofstream(cfg) << "snr_db = 0\ntau = 0.1\ntrials = 40\nmodes = da\n";
  REQUIRE(run("run --config " + cfg.string() + " --snr-db 5,10 --mode da,soft --trials 12 --out " +
              out.string() + " --format csv") == 0);
  const auto r = load_report(out, ReportFormat::Csv);
  CHECK(r.cells.size() == 4);
  for (const auto& c : r.cells) {
    CHECK(c.trials() == 12);
    CHECK(c.snr_db != 0.0);
  }

  REQUIRE(run("run --config " + cfg.string() + " --trials 5 --lowcomplexity-tanh --mu 0.01 --rolloff 0.25 "
              "--sps 4 --seed 3 --tau 0.2 --out " + out.string() + " --format json") == 0);
  const auto j = load_report(out, ReportFormat::Json);
  CHECK(j.cells.size() == 1);
  CHECK(j.metadata.at("lowcomplexity_tanh") == "true");
  CHECK(j.metadata.at("sps") == "4");
  fs::remove_all(out);
  fs::remove(cfg);
}

TEST_CASE("invalid configuration exits with 1") {
  const auto cfg = temp("bad");
  std::ofstream(cfg) << "trials = 0\n";
  CHECK(run("run --config " + cfg.string()) == 1);
  std::ofstream(cfg) << "colour = blue\n";
  CHECK(run("run --config " + cfg.string()) == 1);
  CHECK(run("run --tau 0.45") == 1);
  CHECK(run("run --format xml --trials 1") == 1);
  CHECK(run("run --mode ca") == 1);
  CHECK(run("run --config /nonexistent/file.cfg") == 1);
  CHECK(run("launch") == 1);
  CHECK(run("crb --block-len 0") == 1);
  CHECK(run("--help") == 0);
  fs::remove(cfg);
}

TEST_CASE("runtime failure exits with 2") {
  const auto blocker = temp("blocker");
  std::ofstream(blocker) << "x";
  CHECK(run("run --trials 2 --out " + (blocker / "sub").string()) == 2);
  fs::remove(blocker);
}

TEST_CASE("crb and scurve subcommands") {
  const auto out = temp("sc");
  CHECK(run("crb --snr-db 0,10 --block-len 100 --rolloff 0.3") == 0);
  CHECK(run("scurve --tau 0.1 --mode da --points 11 --frames 2 --out " + out.string()) == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "mode,snr_db,tau_over_t,u_over_t,mean_error");
  int rows = 0;
  for (std::string l; std::getline(in, l);) ++rows;
  CHECK(rows == 11);
  fs::remove(out);
}
