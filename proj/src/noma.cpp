#include "vlcsec/noma.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "vlcsec/errors.hpp"

namespace vlcsec::noma {

GroupAssignment make_assignment(int n_leds, int n_users,
                                std::vector<std::vector<int>> led_users) {
  GroupAssignment ga;
  ga.n_leds = n_leds;
  ga.n_users = n_users;
  for (auto& set : led_users) std::sort(set.begin(), set.end());
  ga.led_users = std::move(led_users);
  ga.led_group.assign(n_leds, -1);

  std::map<std::vector<int>, int> ids;
  for (int n = 0; n < n_leds; ++n) {
    const auto& set = ga.led_users[n];
    if (set.empty()) continue;  // idle LED, bias current only
    auto [it, inserted] = ids.try_emplace(set, static_cast<int>(ga.groups.size()));
    if (inserted) {
      SignalGroup g;
      g.users = set;
      ga.groups.push_back(std::move(g));
    }
    ga.groups[it->second].leds.push_back(n);
    ga.led_group[n] = it->second;
  }

  ga.user_leds.assign(n_users, {});
  ga.user_groups.assign(n_users, {});
  for (int n = 0; n < n_leds; ++n) {
    for (int k : ga.led_users[n]) ga.user_leds[k].push_back(n);
  }
  for (int gi = 0; gi < static_cast<int>(ga.groups.size()); ++gi) {
    for (int k : ga.groups[gi].users) ga.user_groups[k].push_back(gi);
  }
  return ga;
}

PowerAllocation fixed_allocation(int group_size, double zeta) {
  if (group_size < 1) throw RangeError("fixed_allocation: group_size must be >= 1");
  if (!(zeta > 0.5 && zeta <= 1.0)) {
    throw RangeError("fixed_allocation: zeta must lie in (0.5, 1]");
  }
  PowerAllocation alloc;
  alloc.betas.resize(group_size);
  for (int i = 0; i + 1 < group_size; ++i) {
    alloc.betas[i] = zeta * std::pow(1.0 - zeta, i);
  }
  alloc.betas[group_size - 1] = std::pow(1.0 - zeta, group_size - 1);
  return alloc;
}

std::vector<int> sic_order(const std::vector<int>& users,
                           const std::vector<double>& gain_of) {
  std::vector<int> order = users;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (gain_of[a] != gain_of[b]) return gain_of[a] < gain_of[b];
    return a < b;
  });
  return order;
}

void assign_sic_orders(GroupAssignment& ga,
                       const std::vector<std::vector<double>>& estimated_gains) {
  std::vector<double> combined(ga.n_users, 0.0);
  for (auto& group : ga.groups) {
    for (int k : group.users) {
      double sum = 0.0;
      for (int n : group.leds) sum += estimated_gains[k][n];
      combined[k] = sum;
    }
    group.sic_order = sic_order(group.users, combined);
  }
}

namespace {

int decode_position(const SignalGroup& group, int user) {
  for (int i = 0; i < static_cast<int>(group.sic_order.size()); ++i) {
    if (group.sic_order[i] == user) return i;
  }
  return -1;
}

bool led_serves(const GroupAssignment& ga, int led, int user) {
  const auto& set = ga.led_users[led];
  return std::binary_search(set.begin(), set.end(), user);
}

// Shared SINR assembly for a receiver decoding user k's message through the
// gain row `h` (one entry per LED):
//   numerator   (sum of serving-LED gains)^2 * beta at k's decode position,
//               maximized over the groups carrying k,
//   denominator NOMA residual of positions decoded after k in that group,
//               plus squared cross-signal gain, plus noise_var / power.
double decode_sinr(int k, const GroupAssignment& ga, std::span<const double> h,
                   std::span<const PowerAllocation> alloc, double power,
                   double noise_var, InterferenceSet mode) {
  const auto& carrying = ga.user_groups[k];
  if (carrying.empty() || power <= 0.0) return 0.0;

  double amp = 0.0;
  for (int n : ga.user_leds[k]) amp += h[n];
  const double sig = amp * amp;

  int best_group = -1;
  int best_pos = -1;
  double best_beta = -1.0;
  for (int gi : carrying) {
    const int pos = decode_position(ga.groups[gi], k);
    const double beta = alloc[gi].betas[pos];
    if (beta > best_beta) {
      best_beta = beta;
      best_group = gi;
      best_pos = pos;
    }
  }

  double residual = 0.0;
  const auto& betas = alloc[best_group].betas;
  for (int j = best_pos + 1; j < static_cast<int>(betas.size()); ++j) {
    residual += betas[j];
  }

  double cross_amp = 0.0;
  if (mode == InterferenceSet::physical) {
    for (int n = 0; n < ga.n_leds; ++n) {
      if (ga.led_group[n] != -1 && !led_serves(ga, n, k)) cross_amp += h[n];
    }
  } else {
    const int representative = ga.groups[best_group].leds.front();
    for (int n : ga.user_leds[k]) {
      if (n != representative) cross_amp += h[n];
    }
  }

  const double denom = sig * residual + cross_amp * cross_amp + noise_var / power;
  return sig * best_beta / denom;
}

}  // namespace

double user_sinr(int k, const GroupAssignment& ga,
                 const std::vector<std::vector<double>>& gains,
                 std::span<const PowerAllocation> alloc, double power,
                 double noise_var, InterferenceSet mode) {
  return decode_sinr(k, ga, gains[k], alloc, power, noise_var, mode);
}

double eve_sinr(int k, const GroupAssignment& ga, std::span<const double> eve_gains,
                std::span<const PowerAllocation> alloc, double power,
                double noise_var, InterferenceSet mode) {
  return decode_sinr(k, ga, eve_gains, alloc, power, noise_var, mode);
}

double rate(double sinr) { return 0.5 * std::log2(1.0 + sinr); }

RateReport secrecy_terms(std::span<const double> user_rates,
                         std::span<const double> wiretap_rates) {
  RateReport report;
  report.user_rate.assign(user_rates.begin(), user_rates.end());
  report.wiretap_rate.assign(wiretap_rates.begin(), wiretap_rates.end());
  report.secrecy.resize(user_rates.size());
  for (std::size_t i = 0; i < user_rates.size(); ++i) {
    report.secrecy[i] = std::max(user_rates[i] - wiretap_rates[i], 0.0);
    report.sum_rate += user_rates[i];
    report.sum_secrecy += report.secrecy[i];
  }
  return report;
}

namespace {

// Estimated sum-rate objective of one group as a function of its betas
// (indexed by decode position). a[i] is the squared combined estimated gain of
// the user at position i, c[i] the beta-free part of their denominator.
struct EstimatedObjective {
  std::vector<double> a;
  std::vector<double> c;

  double value(const std::vector<double>& beta) const {
    const int m = static_cast<int>(beta.size());
    double f = 0.0;
    double suffix = 0.0;
    for (int i = m - 1; i >= 0; --i) {
      const double tail = suffix;
      suffix += beta[i];
      f += std::log(a[i] * suffix + c[i]) - std::log(a[i] * tail + c[i]);
    }
    return f / (2.0 * std::log(2.0));
  }

  std::vector<double> gradient(const std::vector<double>& beta) const {
    const int m = static_cast<int>(beta.size());
    std::vector<double> suffix(m + 1, 0.0);
    for (int i = m - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + beta[i];
    std::vector<double> grad(m, 0.0);
    const double scale = 1.0 / (2.0 * std::log(2.0));
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      acc += a[i] / (a[i] * suffix[i] + c[i]);
      grad[i] = acc * scale;
      acc -= a[i] / (a[i] * suffix[i + 1] + c[i]);
    }
    return grad;
  }
};

// Pool-adjacent-violators fit of the closest nonincreasing sequence.
std::vector<double> isotonic_nonincreasing(const std::vector<double>& v) {
  std::vector<double> mean;
  std::vector<int> count;
  mean.reserve(v.size());
  count.reserve(v.size());
  for (double x : v) {
    mean.push_back(x);
    count.push_back(1);
    while (mean.size() >= 2 && mean[mean.size() - 2] < mean.back()) {
      const std::size_t last = mean.size() - 1;
      const double total = mean[last - 1] * count[last - 1] + mean[last] * count[last];
      count[last - 1] += count[last];
      mean[last - 1] = total / count[last - 1];
      mean.pop_back();
      count.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t b = 0; b < mean.size(); ++b) {
    out.insert(out.end(), count[b], mean[b]);
  }
  return out;
}

// Euclidean-style projection onto { beta >= 0, nonincreasing, sum <= 1 }:
// isotonic fit first, then the budgeted-simplex threshold on the (already
// sorted) result. Order and nonnegativity survive the thresholding.
std::vector<double> project_feasible(const std::vector<double>& v) {
  std::vector<double> w = isotonic_nonincreasing(v);
  double positive_sum = 0.0;
  for (double x : w) positive_sum += std::max(x, 0.0);
  if (positive_sum <= 1.0) {
    for (double& x : w) x = std::max(x, 0.0);
    return w;
  }
  double cum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    cum += w[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (w[j] > t) tau = t;
  }
  for (double& x : w) x = std::max(x - tau, 0.0);
  return w;
}

}  // namespace

PowerAllocation optimize_allocation(const SignalGroup& group, const GroupAssignment& ga,
                                    const std::vector<std::vector<double>>& estimated_gains,
                                    double power, double noise_var,
                                    InterferenceSet mode) {
  const int m = static_cast<int>(group.sic_order.size());
  if (m == 1) return PowerAllocation{{1.0}, true};

  EstimatedObjective obj;
  obj.a.resize(m);
  obj.c.resize(m);
  for (int i = 0; i < m; ++i) {
    const int k = group.sic_order[i];
    double amp = 0.0;
    for (int n : ga.user_leds[k]) amp += estimated_gains[k][n];
    obj.a[i] = amp * amp;

    double cross_amp = 0.0;
    if (mode == InterferenceSet::physical) {
      for (int n = 0; n < ga.n_leds; ++n) {
        if (ga.led_group[n] != -1 &&
            !std::binary_search(ga.led_users[n].begin(), ga.led_users[n].end(), k)) {
          cross_amp += estimated_gains[k][n];
        }
      }
    } else {
      const int representative = group.leds.front();
      for (int n : ga.user_leds[k]) {
        if (n != representative) cross_amp += estimated_gains[k][n];
      }
    }
    obj.c[i] = cross_amp * cross_amp + noise_var / power;
  }

  constexpr int kRestarts = 8;
  constexpr int kMaxIterations = 10000;
  constexpr int kWindow = 50;
  constexpr double kImprovementTol = 1e-9;

  std::vector<double> best_beta;
  double best_value = -std::numeric_limits<double>::infinity();
  bool best_converged = false;

  // The objective is not concave; restarts cover the flat-prefix vertices of
  // the constraint set (where optima tend to sit), the fixed split, and random
  // interior points.
  const int vertex_starts = std::min(m, kRestarts - 3);
  for (int restart = 0; restart < kRestarts; ++restart) {
    std::vector<double> beta(m, 0.0);
    if (restart < vertex_starts) {
      const int prefix = restart + 1;  // equal split over the first `prefix` slots
      std::fill(beta.begin(), beta.begin() + prefix, 1.0 / prefix);
    } else if (restart == vertex_starts) {
      std::fill(beta.begin(), beta.end(), 1.0 / m);
    } else if (restart == vertex_starts + 1) {
      beta = fixed_allocation(m, 0.6).betas;
    } else {
      std::mt19937_64 rng(0xB0A5E5ull + static_cast<unsigned>(restart));
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      double sum = 0.0;
      for (double& b : beta) {
        b = -std::log(1.0 - uni(rng));
        sum += b;
      }
      for (double& b : beta) b /= sum;
      std::sort(beta.begin(), beta.end(), std::greater<>());
      beta = project_feasible(beta);
    }

    double f = obj.value(beta);
    double step = 0.25;
    double window_ref = f;
    int window_count = 0;
    bool converged = false;

    for (int iter = 0; iter < kMaxIterations; ++iter) {
      const std::vector<double> grad = obj.gradient(beta);
      std::vector<double> candidate(m);
      for (int i = 0; i < m; ++i) candidate[i] = beta[i] + step * grad[i];
      candidate = project_feasible(candidate);
      const double fc = obj.value(candidate);
      if (fc >= f) {
        beta = std::move(candidate);
        f = fc;
        step *= 1.25;
      } else {
        step = std::max(step * 0.5, 1e-18);
      }
      if (++window_count == kWindow) {
        if (f - window_ref < kImprovementTol) {
          converged = true;
          break;
        }
        window_ref = f;
        window_count = 0;
      }
    }

    if (f > best_value) {
      best_value = f;
      best_beta = beta;
      best_converged = converged;
    }
  }

  return PowerAllocation{std::move(best_beta), best_converged};
}

}  // namespace vlcsec::noma
