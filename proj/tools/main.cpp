#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vlcsec/config.hpp"
#include "vlcsec/errors.hpp"
#include "vlcsec/io.hpp"
#include "vlcsec/oracle.hpp"
#include "vlcsec/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 3;
constexpr int kExitIo = 4;

int cmd_run(const std::string& config_path, const vlcsec::cfg::Overrides& overrides,
            const std::string& out_dir, bool strict) {
  const std::string started = vlcsec::io::utc_timestamp();
  const vlcsec::cfg::Resolved resolved = vlcsec::cfg::load_config(config_path, overrides);

  const std::vector<vlcsec::sim::CampaignStats> rows = vlcsec::sim::sweep(resolved.campaign);
  const std::string finished = vlcsec::io::utc_timestamp();
  const vlcsec::io::RunOutput paths =
      vlcsec::io::write_run(resolved, rows, out_dir, started, finished);

  long long flagged = 0;
  for (const auto& row : rows) {
    flagged += row.flagged_trials;
    std::printf("P_s=%.4g dBm", row.power_dbm);
    if (row.eve_fixed) std::printf(" eve=(%g, %g)", row.eve_x, row.eve_y);
    std::printf("  mean_RD=%.6g (se %.2g)  mean_RS=%.6g (se %.2g)  trials=%lld\n",
                row.mean_sum_rate, row.se_sum_rate, row.mean_sum_secrecy,
                row.se_sum_secrecy, row.trials);
  }
  std::printf("wrote %s, %s, %s\n", paths.summary_path.c_str(),
              paths.per_user_path.c_str(), paths.manifest_path.c_str());
  if (strict && flagged > 0) {
    std::fprintf(stderr, "strict: %lld flagged trials (solver did not converge)\n",
                 flagged);
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_oracle(const std::string& kind, long long n, std::uint64_t seed) {
  bool pass = false;
  std::string text;
  if (kind == "blockage") {
    const auto r = vlcsec::oracle::run_blockage(n, seed);
    pass = r.pass;
    text = r.describe();
  } else if (kind == "sinr") {
    const auto r = vlcsec::oracle::run_sinr(n, seed);
    pass = r.pass;
    text = r.describe();
  } else if (kind == "alloc") {
    const auto r = vlcsec::oracle::run_alloc(n, seed);
    pass = r.pass;
    text = r.describe();
  } else if (kind == "azimuth") {
    const auto r = vlcsec::oracle::run_azimuth(n, seed);
    pass = r.pass;
    text = r.describe();
  } else {
    std::fprintf(stderr, "unknown oracle kind '%s'\n", kind.c_str());
    return kExitConfig;
  }
  std::printf("%s\n", text.c_str());
  return pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indoor VLC downlink NOMA simulator with body blockage and secrecy metrics"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a campaign and write CSV outputs");
  std::string config_path;
  std::string out_dir = "out";
  bool strict = false;
  vlcsec::cfg::Overrides overrides;
  std::string scenario, strategy, allocation, eve;
  long long trials = -1;
  long long seed = -1;
  int threads = -1;
  std::vector<double> power_dbm;
  run->add_option("--config", config_path, "Config JSON (a run manifest also works)");
  run->add_option("--scenario", scenario, "Scenario name: 1, 2, or 3");
  run->add_option("--strategy", strategy, "broadcasting | simple | smart");
  run->add_option("--allocation", allocation, "fixed | optimized");
  run->add_option("--trials", trials, "Monte Carlo trials per sweep point");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--power-dbm", power_dbm, "Transmission power in dBm (repeatable)")
      ->allow_extra_args(false);
  run->add_option("--eve", eve, "uniform | fixed:x,y | grid:step | clone:k");
  run->add_option("--out-dir", out_dir, "Output directory");
  run->add_option("--threads", threads, "Worker threads (0 = hardware)");
  run->add_flag("--strict", strict, "Fail on flagged trials");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Run an independent self-check");
  std::string kind;
  long long n = 1000;
  std::uint64_t oracle_seed = 1;
  oracle->add_option("kind", kind, "blockage | sinr | alloc | azimuth")->required();
  oracle->add_option("--n", n, "Number of random instances");
  oracle->add_option("--seed", oracle_seed, "Seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!scenario.empty()) overrides.scenario = scenario;
      if (!strategy.empty()) overrides.strategy = strategy;
      if (!allocation.empty()) overrides.allocation = allocation;
      if (!eve.empty()) overrides.eve = eve;
      if (trials >= 0) overrides.trials = trials;
      if (seed >= 0) overrides.seed = static_cast<std::uint64_t>(seed);
      if (threads >= 0) overrides.threads = threads;
      overrides.power_dbm = power_dbm;
      return cmd_run(config_path, overrides, out_dir, strict);
    }
    return cmd_oracle(kind, n, oracle_seed);
  } catch (const vlcsec::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const vlcsec::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}
