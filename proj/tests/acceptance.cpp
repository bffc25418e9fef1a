// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Thresholds are fixed here, not tuned at run time.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vlcsec/channel.hpp"
#include "vlcsec/config.hpp"
#include "vlcsec/io.hpp"
#include "vlcsec/noma.hpp"
#include "vlcsec/oracle.hpp"
#include "vlcsec/sim.hpp"
#include "vlcsec/topology.hpp"

using namespace vlcsec;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

sim::CampaignConfig scenario_campaign(const std::string& scenario,
                                      const std::string& strategy, long long trials,
                                      std::uint64_t seed,
                                      const std::vector<double>& power_dbm) {
  cfg::Overrides o;
  o.scenario = scenario;
  o.strategy = strategy;
  o.trials = trials;
  o.seed = seed;
  o.power_dbm = power_dbm;
  return cfg::resolve_config_text("", o).campaign;
}

// --- criterion 1: blockage geometry against sampling + closest approach ----

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = oracle::run_blockage(100000, 1);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double agreement = 1.0 - static_cast<double>(r.sampler_mismatches) / r.cases;
  const bool pass = r.pass && agreement >= 0.999 && elapsed <= 60.0;
  std::ostringstream d;
  d << "blockage oracle on " << r.cases << " draws: sampler agreement " << agreement
    << ", beyond-band disagreements " << r.sampler_mismatches_clear << " (all "
    << (r.uncertified_mismatches_clear == 0 ? "certified sampler blind spots"
                                            : "NOT certified -> engine defect")
    << "), exact-margin mismatches beyond 1e-6: " << r.exact_mismatches_clear
    << ", plane residual " << r.max_plane_residual << ", collinearity residual "
    << r.max_collinearity_residual << ", " << elapsed << " s";
  report(1, pass, d.str());
}

// --- criterion 2: SINR transcription ----------------------------------------

void criterion_2() {
  const auto r = oracle::run_sinr(1000, 1);
  std::ostringstream d;
  d << "decode SINR vs straight-line transcription on " << r.cases
    << " instances: max rel err user " << r.max_rel_error_user << ", eavesdropper "
    << r.max_rel_error_eve << " (tol 1e-12)";
  report(2, r.pass, d.str());
}

// --- criterion 3: power allocation ------------------------------------------

void criterion_3() {
  bool fixed_ok = true;
  for (double zeta : {0.51, 0.55, 0.6, 0.7, 0.8, 0.9, 0.99, 1.0}) {
    for (int size = 1; size <= 6; ++size) {
      const auto alloc = noma::fixed_allocation(size, zeta);
      const double sum = std::accumulate(alloc.betas.begin(), alloc.betas.end(), 0.0);
      if (std::abs(sum - 1.0) > 1e-12) fixed_ok = false;
      for (int i = 0; i + 1 < size; ++i) {
        // Strictly decreasing; at zeta == 1 the tail is identically zero.
        if (zeta < 1.0 && !(alloc.betas[i] > alloc.betas[i + 1])) fixed_ok = false;
        if (alloc.betas[i] < alloc.betas[i + 1]) fixed_ok = false;
      }
    }
  }
  const auto r = oracle::run_alloc(200, 1);
  std::ostringstream d;
  d << "fixed split sums/ordering " << (fixed_ok ? "ok" : "violated")
    << "; optimizer vs 0.01 grid on " << r.cases
    << " instances: worst objective ratio " << r.worst_objective_ratio
    << " (>= 0.99), feasibility violation " << r.max_feasibility_violation
    << " (<= 1e-9), budget saturated " << r.budget_saturated << "/" << r.cases;
  report(3, fixed_ok && r.pass, d.str());
}

// --- criterion 4: azimuth argmax ---------------------------------------------

void criterion_4() {
  const auto r = oracle::run_azimuth(1000, 1);
  std::ostringstream d;
  d << "closed-form azimuth vs 3600-point grid on " << r.cases
    << " geometries: max rel gain gap " << r.max_rel_gain_gap
    << " (tol 1e-9), eval agreement " << r.max_rel_eval_error;
  report(4, r.pass, d.str());
}

// --- criterion 5: triangular lattice -----------------------------------------

void criterion_5() {
  bool pass = true;
  std::ostringstream d;
  const double bound = std::sqrt(3.0) * 3.13 * std::tan(channel::deg2rad(70.0));
  if (!(std::abs(bound - 14.89) < 0.01) || !(bound >= 9.6)) pass = false;
  const auto leds = topology::triangular_lattice(40, 40, 3.98, 0.85,
                                                 channel::deg2rad(70.0), 9.6, 20, 20);
  if (leds.size() != 23) pass = false;
  double worst = 0.0;
  for (std::size_t i = 0; i < leds.size(); ++i) {
    double nearest = 1e300;
    for (std::size_t j = 0; j < leds.size(); ++j) {
      if (i != j) nearest = std::min(nearest, (leds[j] - leds[i]).norm());
    }
    worst = std::max(worst, std::abs(nearest - 9.6));
  }
  if (worst > 1e-9) pass = false;
  d << "side bound sqrt(3)*3.13*tan70 = " << bound << " m >= 9.6, lattice size "
    << leds.size() << " (want 23), worst nearest-neighbor deviation " << worst;
  report(5, pass, d.str());
}

// --- criterion 6: smart linking vs union-find --------------------------------

void criterion_6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> pos(0.0, 40.0);
  std::uniform_int_distribution<int> n_led(1, 23);
  std::uniform_int_distribution<int> n_usr(1, 8);
  bool pass = true;
  for (int it = 0; it < 1000 && pass; ++it) {
    std::vector<Vec3> leds(n_led(rng));
    for (auto& p : leds) p = {pos(rng), pos(rng), 3.98};
    std::vector<Vec3> users(n_usr(rng));
    for (auto& p : users) p = {pos(rng), pos(rng), 0.85};
    const double radius = 2.0 + pos(rng) / 5.0;

    const auto simple =
        topology::assign_groups(topology::Strategy::simple_linking, leds, users, radius);
    const auto smart =
        topology::assign_groups(topology::Strategy::smart_linking, leds, users, radius);

    // Union-find closure over the coverage-sharing graph.
    const int n = static_cast<int>(leds.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        for (int u : simple.led_users[a]) {
          if (std::binary_search(simple.led_users[b].begin(),
                                 simple.led_users[b].end(), u)) {
            parent[find(a)] = find(b);
            break;
          }
        }
      }
    }
    for (int a = 0; a < n && pass; ++a) {
      if (simple.led_users[a].empty() != (smart.led_group[a] < 0)) pass = false;
      for (int b = 0; b < n && pass; ++b) {
        if (simple.led_users[a].empty() || simple.led_users[b].empty()) continue;
        if ((find(a) == find(b)) != (smart.led_group[a] == smart.led_group[b])) {
          pass = false;
        }
      }
    }
    // Served users partition across merged groups.
    for (std::size_t k = 0; k < users.size() && pass; ++k) {
      if (smart.user_groups[k].size() > 1) pass = false;
      if (simple.user_groups[k].empty() != smart.user_groups[k].empty()) pass = false;
    }
  }
  report(6, pass, "smart-linking clusters equal union-find components and served "
                  "users partition, 1000 random placements");
}

// --- criterion 7: power monotonicity and strategy ordering -------------------

void criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> sweep_dbm{14, 18, 22, 26, 30, 34};
  const long long trials = 1000;

  auto broadcast_cfg = scenario_campaign("1", "broadcasting", trials, 1, sweep_dbm);
  const auto rows = sim::sweep(broadcast_cfg);
  bool monotone = rows.size() == sweep_dbm.size();
  for (std::size_t i = 0; monotone && i + 1 < rows.size(); ++i) {
    const double slack = 2.0 * std::hypot(rows[i].se_sum_rate, rows[i + 1].se_sum_rate);
    if (rows[i + 1].mean_sum_rate < rows[i].mean_sum_rate - slack) monotone = false;
  }

  const double mid = 26.0;
  const auto broadcast =
      sim::run_campaign(scenario_campaign("1", "broadcasting", trials, 1, {mid}));
  const auto simple =
      sim::run_campaign(scenario_campaign("1", "simple", trials, 1, {mid}));
  const auto smart = sim::run_campaign(scenario_campaign("1", "smart", trials, 1, {mid}));
  auto separated = [&](const sim::CampaignStats& a, const sim::CampaignStats& b) {
    return a.mean_sum_rate - 1.96 * a.se_sum_rate >
           b.mean_sum_rate + 1.96 * b.se_sum_rate;
  };
  const bool ordering = separated(simple, broadcast) && separated(smart, broadcast);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream d;
  d << "broadcasting mean_RD over {14..34} dBm "
    << (monotone ? "nondecreasing within 2 se" : "NOT monotone") << "; at " << mid
    << " dBm scenario 1: simple " << simple.mean_sum_rate << " and smart "
    << smart.mean_sum_rate << " vs broadcasting " << broadcast.mean_sum_rate
    << " with non-overlapping 95% CIs "
    << (ordering ? "(separated)" : "(NOT separated)") << ", " << elapsed
    << " s (limit 300)";
  report(7, monotone && ordering && elapsed <= 300.0, d.str());
}

// --- criterion 8: secrecy sanity ---------------------------------------------

void criterion_8() {
  bool pass = true;
  // Per-trial clipping bound over a mixed campaign.
  {
    auto cfg = scenario_campaign("2", "simple", 400, 8, {26});
    const sim::Prepared prep = sim::prepare(cfg);
    const auto alloc = sim::allocations_for(prep, cfg.power_watts.front());
    for (std::uint64_t t = 0; t < 400 && pass; ++t) {
      const auto trial =
          sim::run_trial(prep, alloc, cfg.power_watts.front(), cfg.scenario.eve, t);
      if (!(trial.sum_secrecy <= trial.sum_rate)) pass = false;
      for (std::size_t k = 0; k < trial.secrecy.size(); ++k) {
        if (trial.secrecy[k] < 0.0 || trial.secrecy[k] > trial.user_rate[k]) {
          pass = false;
        }
      }
    }
  }
  // A colocated, co-oriented clone erases the cloned user's secrecy term.
  long long clone_trials = 0;
  for (int k = 0; k < 6 && pass; ++k) {
    auto cfg = scenario_campaign("1", "simple", 200, 31 + k, {26});
    cfg.scenario.eve.mode = sim::EveMode::clone;
    cfg.scenario.eve.clone_of = k;
    const sim::Prepared prep = sim::prepare(cfg);
    const auto alloc = sim::allocations_for(prep, cfg.power_watts.front());
    for (std::uint64_t t = 0; t < 200 && pass; ++t) {
      const auto trial =
          sim::run_trial(prep, alloc, cfg.power_watts.front(), cfg.scenario.eve, t);
      if (trial.secrecy[k] != 0.0) pass = false;
      ++clone_trials;
    }
  }
  std::ostringstream d;
  d << "per-trial secrecy <= transmission on 400 trials; cloned eavesdropper "
       "secrecy exactly zero over "
    << clone_trials << " trials across all 6 users";
  report(8, pass, d.str());
}

// --- criterion 9: determinism ------------------------------------------------

void criterion_9() {
  namespace fs = std::filesystem;
  bool pass = true;

  cfg::Overrides o;
  o.scenario = "1";
  o.strategy = "simple";
  o.trials = 64;
  o.seed = 12345;
  o.power_dbm = {20.0, 26.0};
  o.eve = "fixed:15,25";

  const fs::path base = fs::temp_directory_path() / "vlcsec_acceptance9";
  fs::remove_all(base);

  // Serial run, parallel run, and a replay from the first run's manifest.
  o.threads = 1;
  const cfg::Resolved serial = cfg::resolve_config_text("", o);
  const auto out_serial = io::write_run(serial, sim::sweep(serial.campaign),
                                        (base / "serial").string(), "t", "t");
  o.threads = 8;
  const cfg::Resolved parallel = cfg::resolve_config_text("", o);
  const auto out_parallel = io::write_run(parallel, sim::sweep(parallel.campaign),
                                          (base / "parallel").string(), "t", "t");
  const cfg::Resolved replay = cfg::load_config(out_serial.manifest_path);
  const auto out_replay = io::write_run(replay, sim::sweep(replay.campaign),
                                        (base / "replay").string(), "t", "t");

  const std::string s1 = slurp(out_serial.summary_path);
  if (s1.empty()) pass = false;
  if (s1 != slurp(out_parallel.summary_path)) pass = false;
  if (s1 != slurp(out_replay.summary_path)) pass = false;
  const std::string p1 = slurp(out_serial.per_user_path);
  if (p1 != slurp(out_parallel.per_user_path)) pass = false;
  if (p1 != slurp(out_replay.per_user_path)) pass = false;

  report(9, pass, "byte-identical CSVs across serial, 8-thread, and manifest-replay "
                  "runs of the same campaign");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
