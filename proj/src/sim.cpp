#include "vlcsec/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "vlcsec/rng.hpp"

namespace vlcsec::sim {

Prepared prepare(const CampaignConfig& cfg) {
  Prepared prep;
  prep.cfg = cfg;

  const double r_area = topology::coverage_radius(
      cfg.sys.room_height, cfg.sys.device_z, cfg.sys.theta_half);
  prep.assignment = topology::assign_groups(cfg.strategy, cfg.leds,
                                            cfg.scenario.users, r_area);

  const double m = channel::lambertian_order(cfg.sys.theta_half);
  prep.leds.reserve(cfg.leds.size());
  for (const Vec3& pos : cfg.leds) {
    prep.leds.push_back(channel::LedParams{cfg.sys.theta_half, m, pos});
  }

  const int n_users = static_cast<int>(cfg.scenario.users.size());
  prep.estimated_gains.assign(n_users, std::vector<double>(cfg.leds.size(), 0.0));
  for (int k = 0; k < n_users; ++k) {
    for (std::size_t n = 0; n < prep.leds.size(); ++n) {
      prep.estimated_gains[k][n] = channel::estimated_channel_gain(
          prep.leds[n].position, cfg.scenario.users[k], prep.leds[n], cfg.sys.pd);
    }
  }
  noma::assign_sic_orders(prep.assignment, prep.estimated_gains);
  return prep;
}

std::vector<noma::PowerAllocation> allocations_for(const Prepared& prep, double power) {
  std::vector<noma::PowerAllocation> alloc;
  alloc.reserve(prep.assignment.groups.size());
  for (const auto& group : prep.assignment.groups) {
    if (prep.cfg.scheme == AllocationScheme::fixed) {
      alloc.push_back(noma::fixed_allocation(static_cast<int>(group.users.size()),
                                             prep.cfg.zeta));
    } else {
      alloc.push_back(noma::optimize_allocation(group, prep.assignment,
                                                prep.estimated_gains, power,
                                                prep.cfg.sys.noise_var,
                                                prep.cfg.interference));
    }
  }
  return alloc;
}

TrialResult run_trial(const Prepared& prep,
                      const std::vector<noma::PowerAllocation>& alloc, double power,
                      const EvePlacement& eve, std::uint64_t trial_index) {
  const CampaignConfig& cfg = prep.cfg;
  const int n_users = static_cast<int>(cfg.scenario.users.size());
  const int n_leds = static_cast<int>(prep.leds.size());

  std::mt19937_64 rng = make_trial_rng(cfg.master_seed, trial_index);

  Vec3 eve_pos{eve.x, eve.y, cfg.sys.device_z};
  if (eve.mode == EveMode::uniform) {
    std::uniform_real_distribution<double> ux(eve.x_min, eve.x_max);
    std::uniform_real_distribution<double> uy(eve.y_min, eve.y_max);
    eve_pos.x = ux(rng);
    eve_pos.y = uy(rng);
  } else if (eve.mode == EveMode::clone) {
    eve_pos = cfg.scenario.users[eve.clone_of];
  }

  std::vector<channel::Orientation> orientation(n_users);
  for (int k = 0; k < n_users; ++k) orientation[k] = channel::sample_orientation(rng);
  const channel::Orientation eve_orientation = (eve.mode == EveMode::clone)
                                                   ? orientation[eve.clone_of]
                                                   : channel::sample_orientation(rng);

  std::vector<channel::Receiver> receivers;
  receivers.reserve(n_users + 1);
  for (int k = 0; k < n_users; ++k) {
    receivers.push_back(channel::make_receiver(k, cfg.scenario.users[k], orientation[k],
                                               cfg.sys.body.device_offset,
                                               cfg.sys.body.height, cfg.sys.body.radius));
  }
  receivers.push_back(channel::make_receiver(channel::kEavesdropper, eve_pos,
                                             eve_orientation, cfg.sys.body.device_offset,
                                             cfg.sys.body.height, cfg.sys.body.radius));

  std::vector<geom::BodyCylinder> bodies;
  bodies.reserve(receivers.size());
  for (const auto& rx : receivers) bodies.push_back(rx.body);

  // Gain matrix over all receivers, eavesdropper row last. Blockage is tested
  // explicitly so blocked pairs can be counted; unblocked pairs then see an
  // empty body list.
  TrialResult trial;
  std::vector<std::vector<double>> gains(receivers.size(),
                                         std::vector<double>(n_leds, 0.0));
  for (std::size_t r = 0; r < receivers.size(); ++r) {
    for (int n = 0; n < n_leds; ++n) {
      bool blocked = false;
      for (const auto& body : bodies) {
        if (geom::is_blocked(prep.leds[n].position, receivers[r].pd_position, body)) {
          blocked = true;
          break;
        }
      }
      if (blocked) {
        ++trial.blocked_pairs;
      } else {
        gains[r][n] = channel::channel_gain(prep.leds[n], receivers[r], {}, cfg.sys.pd);
      }
    }
  }

  std::vector<double> user_rates(n_users, 0.0);
  std::vector<double> wiretap_rates(n_users, 0.0);
  const auto& eve_row = gains.back();
  for (int k = 0; k < n_users; ++k) {
    user_rates[k] = noma::rate(noma::user_sinr(k, prep.assignment, gains, alloc, power,
                                               cfg.sys.noise_var, cfg.interference));
    wiretap_rates[k] = noma::rate(noma::eve_sinr(k, prep.assignment, eve_row, alloc,
                                                 power, cfg.sys.noise_var,
                                                 cfg.interference));
  }
  const noma::RateReport report = noma::secrecy_terms(user_rates, wiretap_rates);
  trial.user_rate = report.user_rate;
  trial.wiretap_rate = report.wiretap_rate;
  trial.secrecy = report.secrecy;
  trial.sum_rate = report.sum_rate;
  trial.sum_secrecy = report.sum_secrecy;
  trial.solver_flagged = std::any_of(alloc.begin(), alloc.end(),
                                     [](const auto& a) { return !a.converged; });
  return trial;
}

namespace {

int resolve_threads(int requested, long long trials) {
  unsigned n = requested > 0 ? static_cast<unsigned>(requested)
                             : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, 16u);
  return static_cast<int>(std::min<long long>(n, std::max<long long>(trials, 1)));
}

}  // namespace

CampaignStats run_campaign(const CampaignConfig& cfg) {
  if (cfg.power_watts.size() != 1) {
    throw std::invalid_argument("run_campaign: expects exactly one power point");
  }
  if (cfg.scenario.eve.mode == EveMode::grid) {
    throw std::invalid_argument("run_campaign: grid placements go through sweep()");
  }
  if (cfg.trials < 1) throw std::invalid_argument("run_campaign: trials must be >= 1");

  const double power = cfg.power_watts.front();
  const Prepared prep = prepare(cfg);
  const auto alloc = allocations_for(prep, power);
  const long long trials = cfg.trials;

  std::vector<TrialResult> results(trials);
  const int workers = resolve_threads(cfg.threads, trials);
  if (workers <= 1) {
    for (long long t = 0; t < trials; ++t) {
      results[t] = run_trial(prep, alloc, power, cfg.scenario.eve, t);
    }
  } else {
    std::atomic<long long> next{0};
    auto work = [&]() {
      for (long long t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
        results[t] = run_trial(prep, alloc, power, cfg.scenario.eve, t);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  const int n_users = static_cast<int>(cfg.scenario.users.size());
  CampaignStats stats;
  stats.power_watts = power;
  stats.power_dbm = cfg.power_dbm.size() == 1 ? cfg.power_dbm.front()
                                              : 10.0 * std::log10(power) + 30.0;
  stats.eve_fixed = cfg.scenario.eve.mode == EveMode::fixed ||
                    cfg.scenario.eve.mode == EveMode::grid;
  stats.eve_x = cfg.scenario.eve.x;
  stats.eve_y = cfg.scenario.eve.y;
  stats.trials = trials;
  stats.seed = cfg.master_seed;
  stats.user_mean_rate.assign(n_users, 0.0);
  stats.user_mean_wiretap.assign(n_users, 0.0);
  stats.user_mean_secrecy.assign(n_users, 0.0);

  for (int k = 0; k < n_users; ++k) {
    if (prep.assignment.user_groups[k].empty()) ++stats.unserved_users;
  }

  // Aggregation runs in trial order regardless of how the trials executed.
  double sum_rd = 0.0, sum_rd2 = 0.0, sum_rs = 0.0, sum_rs2 = 0.0;
  double blocked = 0.0;
  for (const TrialResult& trial : results) {
    sum_rd += trial.sum_rate;
    sum_rd2 += trial.sum_rate * trial.sum_rate;
    sum_rs += trial.sum_secrecy;
    sum_rs2 += trial.sum_secrecy * trial.sum_secrecy;
    blocked += trial.blocked_pairs;
    if (trial.solver_flagged) ++stats.flagged_trials;
    for (int k = 0; k < n_users; ++k) {
      stats.user_mean_rate[k] += trial.user_rate[k];
      stats.user_mean_wiretap[k] += trial.wiretap_rate[k];
      stats.user_mean_secrecy[k] += trial.secrecy[k];
      if (trial.wiretap_rate[k] > trial.user_rate[k]) ++stats.clipped_terms;
    }
  }
  const double n = static_cast<double>(trials);
  stats.mean_sum_rate = sum_rd / n;
  stats.mean_sum_secrecy = sum_rs / n;
  stats.mean_blocked_pairs = blocked / n;
  if (trials > 1) {
    const double var_rd =
        std::max(0.0, (sum_rd2 - n * stats.mean_sum_rate * stats.mean_sum_rate) / (n - 1.0));
    const double var_rs = std::max(
        0.0, (sum_rs2 - n * stats.mean_sum_secrecy * stats.mean_sum_secrecy) / (n - 1.0));
    stats.se_sum_rate = std::sqrt(var_rd / n);
    stats.se_sum_secrecy = std::sqrt(var_rs / n);
  }
  for (int k = 0; k < n_users; ++k) {
    stats.user_mean_rate[k] /= n;
    stats.user_mean_wiretap[k] /= n;
    stats.user_mean_secrecy[k] /= n;
  }
  return stats;
}

std::vector<CampaignStats> sweep(const CampaignConfig& cfg) {
  std::vector<EvePlacement> nodes;
  if (cfg.scenario.eve.mode == EveMode::grid) {
    const EvePlacement& g = cfg.scenario.eve;
    for (double y = g.y_min; y <= g.y_max + 1e-9; y += g.step) {
      for (double x = g.x_min; x <= g.x_max + 1e-9; x += g.step) {
        EvePlacement node;
        node.mode = EveMode::fixed;
        node.x = x;
        node.y = y;
        nodes.push_back(node);
      }
    }
  } else {
    nodes.push_back(cfg.scenario.eve);
  }

  std::vector<CampaignStats> rows;
  rows.reserve(cfg.power_watts.size() * nodes.size());
  for (std::size_t p = 0; p < cfg.power_watts.size(); ++p) {
    for (const EvePlacement& node : nodes) {
      CampaignConfig point = cfg;
      point.power_watts = {cfg.power_watts[p]};
      point.power_dbm.clear();
      if (p < cfg.power_dbm.size()) point.power_dbm = {cfg.power_dbm[p]};
      point.scenario.eve = node;
      rows.push_back(run_campaign(point));
    }
  }
  return rows;
}

}  // namespace vlcsec::sim
