#include "vlcsec/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "vlcsec/channel.hpp"
#include "vlcsec/geom.hpp"
#include "vlcsec/noma.hpp"
#include "vlcsec/rng.hpp"
#include "vlcsec/vec3.hpp"

namespace vlcsec::oracle {

namespace {

// Room and device constants the random draws are confined to.
constexpr double kRoom = 40.0;
constexpr double kCeiling = 3.98;
constexpr double kDeviceZ = 0.85;
constexpr double kBodyH = 1.6;
constexpr double kBodyR = 0.2;
constexpr double kDeviceOffset = 0.4;
constexpr double kNoiseVar = 1.4621771744567184e-13;  // -98.35 dBm

constexpr double kMarginBand = 1e-6;
constexpr int kSamplesPerSegment = 10000;

double rel_gap(double got, double want) {
  const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
  return std::abs(got - want) / scale;
}

}  // namespace

// ---------------------------------------------------------------------------
// Blockage

namespace {

// Smallest horizontal distance between the light segment and the cylinder
// axis over the part of the segment at or below the cylinder top.
double closest_approach(const Vec3& s, const Vec3& d, const Vec3& axis_top,
                        double body_h) {
  const double t_top = (body_h - s.z) / (d.z - s.z);  // z is strictly decreasing
  const double px = s.x - axis_top.x;
  const double py = s.y - axis_top.y;
  const double vx = d.x - s.x;
  const double vy = d.y - s.y;
  const double vv = vx * vx + vy * vy;
  double t = vv > 0.0 ? -(px * vx + py * vy) / vv : 0.0;
  t = std::clamp(t, std::clamp(t_top, 0.0, 1.0), 1.0);
  const double qx = px + t * vx;
  const double qy = py + t * vy;
  return std::hypot(qx, qy);
}

bool sampled_blocked(const Vec3& s, const Vec3& d, const Vec3& axis_top,
                     double body_h, double body_r) {
  const double r2 = body_r * body_r;
  const Vec3 step = (d - s) * (1.0 / (kSamplesPerSegment - 1));
  Vec3 p = s;
  for (int i = 0; i < kSamplesPerSegment; ++i, p = p + step) {
    if (p.z > body_h) continue;
    const double dx = p.x - axis_top.x;
    const double dy = p.y - axis_top.y;
    if (dx * dx + dy * dy <= r2) return true;
  }
  return false;
}

}  // namespace

BlockageReport run_blockage(long long n, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng = make_trial_rng(seed, 0xB10C);
  std::uniform_real_distribution<double> in_room(0.0, kRoom);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  BlockageReport report;
  report.cases = n;
  for (long long i = 0; i < n; ++i) {
    const Vec3 s{in_room(rng), in_room(rng), kCeiling};
    const Vec3 d{in_room(rng), in_room(rng), kDeviceZ};

    Vec3 axis_top;
    if (i % 2 == 0) {
      // A body placed like a user's: axis at the standing offset from a
      // uniformly drawn device position.
      const Vec3 device{in_room(rng), in_room(rng), kDeviceZ};
      axis_top = geom::body_top_center(device, angle(rng), kDeviceOffset, kBodyH);
    } else {
      // A body deliberately near the light path so grazing margins occur.
      const double t = unit(rng);
      const Vec3 on_path = s + t * (d - s);
      const double bearing = angle(rng);
      const double off = (2.0 * unit(rng) - 1.0) * 2.0 * kBodyR;
      axis_top = Vec3{on_path.x + off * std::cos(bearing),
                      on_path.y + off * std::sin(bearing), kBodyH};
    }
    axis_top.x = std::clamp(axis_top.x, 0.0, kRoom);
    axis_top.y = std::clamp(axis_top.y, 0.0, kRoom);
    const geom::BodyCylinder body{axis_top, kBodyR, kBodyH};

    const bool engine = geom::is_blocked(s, d, body);
    const bool sampler = sampled_blocked(s, d, axis_top, kBodyH, kBodyR);
    const double margin = std::abs(closest_approach(s, d, axis_top, kBodyH) - kBodyR);
    const bool exact = closest_approach(s, d, axis_top, kBodyH) <= kBodyR;

    if (exact) ++report.truth_blocked;
    if (sampler) ++report.sampler_blocked;
    if (engine != sampler) {
      ++report.sampler_mismatches;
      if (margin > kMarginBand) {
        ++report.sampler_mismatches_clear;
        // Certified sampler miss: the segment provably enters the cylinder
        // (engine and exact margin agree) but every sample point landed
        // outside. Anything else is a genuine engine defect.
        const bool certified = engine && exact && !sampler;
        if (!certified) ++report.uncertified_mismatches_clear;
      }
    }
    if (engine != exact && margin > kMarginBand) ++report.exact_mismatches_clear;

    // Residuals of the two plane crossings behind the blockage test.
    const Vec3 ray = d - s;
    const geom::Plane top{axis_top, {0.0, 0.0, 1.0}};
    if (auto q = geom::line_plane_intersection(s, ray, top)) {
      const double plane_res = std::abs((*q - axis_top).dot(top.normal));
      const Vec3 along = *q - s;
      const double col_res =
          along.cross(ray).norm() / std::max(ray.norm() * along.norm(), 1e-300);
      report.max_plane_residual = std::max(report.max_plane_residual, plane_res);
      report.max_collinearity_residual =
          std::max(report.max_collinearity_residual, col_res);
    }
    const Vec3 normal{ray.x, ray.y, 0.0};
    if (normal.horizontal_norm() > 0.0) {
      const geom::Plane vertical{axis_top, normal};
      if (auto b = geom::line_plane_intersection(s, ray, vertical)) {
        const double plane_res =
            std::abs((*b - axis_top).dot(normal)) / normal.norm();
        const Vec3 along = *b - s;
        const double col_res =
            along.cross(ray).norm() / std::max(ray.norm() * along.norm(), 1e-300);
        report.max_plane_residual = std::max(report.max_plane_residual, plane_res);
        report.max_collinearity_residual =
            std::max(report.max_collinearity_residual, col_res);
      }
    }
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double agreement =
      1.0 - static_cast<double>(report.sampler_mismatches) / std::max<long long>(n, 1);
  report.pass = agreement >= 0.999 && report.uncertified_mismatches_clear == 0 &&
                report.exact_mismatches_clear == 0 &&
                report.max_plane_residual <= 1e-9 &&
                report.max_collinearity_residual <= 1e-9;
  return report;
}

std::string BlockageReport::describe() const {
  std::ostringstream out;
  out << "blockage: cases=" << cases << " truth_blocked=" << truth_blocked
      << " sampler_blocked=" << sampler_blocked
      << " sampler_mismatches=" << sampler_mismatches
      << " mismatches_outside_band=" << sampler_mismatches_clear
      << " (certified sampler misses=" << sampler_mismatches_clear - uncertified_mismatches_clear
      << ", uncertified=" << uncertified_mismatches_clear << ")"
      << " exact_mismatches_outside_band=" << exact_mismatches_clear
      << " max_plane_residual=" << max_plane_residual
      << " max_collinearity_residual=" << max_collinearity_residual
      << " elapsed_s=" << elapsed_seconds << (pass ? " PASS" : " FAIL");
  return out.str();
}

// ---------------------------------------------------------------------------
// SINR transcription

namespace {

struct SignalSpec {
  std::vector<int> order;     // decode order, user ids
  std::vector<double> betas;  // by decode position, nonincreasing
};

// Straight-line evaluation of the decode SINR from the raw serving sets.
double straight_line_sinr(int k, const std::vector<std::vector<int>>& led_users,
                          const std::map<std::vector<int>, SignalSpec>& signals,
                          const std::vector<double>& h, double power,
                          double noise_var, noma::InterferenceSet mode) {
  const int n_leds = static_cast<int>(led_users.size());

  std::vector<int> serving;
  for (int n = 0; n < n_leds; ++n) {
    for (int u : led_users[n]) {
      if (u == k) serving.push_back(n);
    }
  }
  if (serving.empty()) return 0.0;

  double amp = 0.0;
  for (int n : serving) amp += h[n];
  const double sig = amp * amp;

  // Distinct serving sets containing k, in first appearance order.
  std::vector<std::vector<int>> carrying;
  for (int n = 0; n < n_leds; ++n) {
    const auto& set = led_users[n];
    if (std::find(set.begin(), set.end(), k) == set.end()) continue;
    if (std::find(carrying.begin(), carrying.end(), set) == carrying.end()) {
      carrying.push_back(set);
    }
  }

  double best_beta = -1.0;
  double best_tail = 0.0;
  std::vector<int> best_set;
  for (const auto& set : carrying) {
    const SignalSpec& spec = signals.at(set);
    int pos = -1;
    for (int i = 0; i < static_cast<int>(spec.order.size()); ++i) {
      if (spec.order[i] == k) pos = i;
    }
    if (spec.betas[pos] > best_beta) {
      best_beta = spec.betas[pos];
      best_tail = 0.0;
      for (int j = pos + 1; j < static_cast<int>(spec.betas.size()); ++j) {
        best_tail += spec.betas[j];
      }
      best_set = set;
    }
  }

  double cross = 0.0;
  if (mode == noma::InterferenceSet::physical) {
    for (int n = 0; n < n_leds; ++n) {
      const auto& set = led_users[n];
      if (set.empty()) continue;
      if (std::find(set.begin(), set.end(), k) == set.end()) cross += h[n];
    }
  } else {
    int representative = -1;
    for (int n = 0; n < n_leds && representative < 0; ++n) {
      if (led_users[n] == best_set) representative = n;
    }
    for (int n : serving) {
      if (n != representative) cross += h[n];
    }
  }

  return sig * best_beta / (sig * best_tail + cross * cross + noise_var / power);
}

}  // namespace

SinrReport run_sinr(long long n, std::uint64_t seed) {
  std::mt19937_64 rng = make_trial_rng(seed, 0x51F1);
  std::uniform_int_distribution<int> small(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SinrReport report;
  report.cases = n;
  for (long long i = 0; i < n; ++i) {
    const int n_leds = small(rng);
    const int n_users = small(rng);

    std::vector<std::vector<int>> led_users(n_leds);
    for (int led = 0; led < n_leds; ++led) {
      for (int k = 0; k < n_users; ++k) {
        if (unit(rng) < 0.6) led_users[led].push_back(k);
      }
    }

    // One random decode order and power split per distinct serving set.
    std::map<std::vector<int>, SignalSpec> signals;
    for (const auto& set : led_users) {
      if (set.empty() || signals.count(set)) continue;
      SignalSpec spec;
      spec.order = set;
      std::shuffle(spec.order.begin(), spec.order.end(), rng);
      spec.betas.resize(set.size());
      double sum = 0.0;
      for (double& b : spec.betas) {
        b = unit(rng) + 1e-3;
        sum += b;
      }
      for (double& b : spec.betas) b /= sum;
      std::sort(spec.betas.begin(), spec.betas.end(), std::greater<>());
      signals[set] = spec;
    }

    auto draw_gain = [&]() {
      return unit(rng) < 0.2 ? 0.0 : std::pow(10.0, -7.0 + 3.0 * unit(rng));
    };
    std::vector<std::vector<double>> gains(n_users, std::vector<double>(n_leds));
    for (auto& row : gains) {
      for (double& g : row) g = draw_gain();
    }
    std::vector<double> eve_gains(n_leds);
    for (double& g : eve_gains) g = draw_gain();

    const double power = std::pow(10.0, -1.0 + 2.0 * unit(rng));

    // Engine-side structures mirroring the same instance.
    noma::GroupAssignment ga = noma::make_assignment(n_leds, n_users, led_users);
    std::vector<noma::PowerAllocation> alloc(ga.groups.size());
    for (std::size_t g = 0; g < ga.groups.size(); ++g) {
      const SignalSpec& spec = signals.at(ga.groups[g].users);
      ga.groups[g].sic_order = spec.order;
      alloc[g].betas = spec.betas;
    }

    for (noma::InterferenceSet mode :
         {noma::InterferenceSet::physical, noma::InterferenceSet::literal}) {
      for (int k = 0; k < n_users; ++k) {
        const double want = straight_line_sinr(k, led_users, signals, gains[k], power,
                                               kNoiseVar, mode);
        const double got =
            noma::user_sinr(k, ga, gains, alloc, power, kNoiseVar, mode);
        report.max_rel_error_user =
            std::max(report.max_rel_error_user, rel_gap(got, want));

        const double eve_want = straight_line_sinr(k, led_users, signals, eve_gains,
                                                   power, kNoiseVar, mode);
        const double eve_got =
            noma::eve_sinr(k, ga, eve_gains, alloc, power, kNoiseVar, mode);
        report.max_rel_error_eve =
            std::max(report.max_rel_error_eve, rel_gap(eve_got, eve_want));
      }
    }
  }

  report.pass =
      report.max_rel_error_user <= 1e-12 && report.max_rel_error_eve <= 1e-12;
  return report;
}

std::string SinrReport::describe() const {
  std::ostringstream out;
  out << "sinr: cases=" << cases << " max_rel_error_user=" << max_rel_error_user
      << " max_rel_error_eve=" << max_rel_error_eve << (pass ? " PASS" : " FAIL");
  return out.str();
}

// ---------------------------------------------------------------------------
// Allocation grid

namespace {

// Direct estimated sum-rate evaluation used on both the grid points and the
// solver output.
double grid_objective(const std::vector<double>& a, const std::vector<double>& c,
                      const std::vector<double>& beta) {
  const int m = static_cast<int>(beta.size());
  double f = 0.0;
  for (int i = 0; i < m; ++i) {
    double tail = 0.0;
    for (int j = i + 1; j < m; ++j) tail += beta[j];
    const double sinr = a[i] * beta[i] / (a[i] * tail + c[i]);
    f += 0.5 * std::log2(1.0 + sinr);
  }
  return f;
}

double grid_best(const std::vector<double>& a, const std::vector<double>& c) {
  const int m = static_cast<int>(a.size());
  const int steps = 100;  // 0.01 resolution over the budget
  double best = 0.0;
  std::vector<double> beta(m, 0.0);
  if (m == 1) {
    for (int i1 = 0; i1 <= steps; ++i1) {
      beta[0] = i1 / 100.0;
      best = std::max(best, grid_objective(a, c, beta));
    }
  } else if (m == 2) {
    for (int i1 = 0; i1 <= steps; ++i1) {
      for (int i2 = 0; i2 <= std::min(i1, steps - i1); ++i2) {
        beta[0] = i1 / 100.0;
        beta[1] = i2 / 100.0;
        best = std::max(best, grid_objective(a, c, beta));
      }
    }
  } else {
    for (int i1 = 0; i1 <= steps; ++i1) {
      for (int i2 = 0; i2 <= std::min(i1, steps - i1); ++i2) {
        for (int i3 = 0; i3 <= std::min(i2, steps - i1 - i2); ++i3) {
          beta[0] = i1 / 100.0;
          beta[1] = i2 / 100.0;
          beta[2] = i3 / 100.0;
          best = std::max(best, grid_objective(a, c, beta));
        }
      }
    }
  }
  return best;
}

}  // namespace

AllocReport run_alloc(long long n, std::uint64_t seed) {
  std::mt19937_64 rng = make_trial_rng(seed, 0xA110C);
  std::uniform_int_distribution<int> size_of(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  AllocReport report;
  report.cases = n;
  for (long long i = 0; i < n; ++i) {
    const int m = size_of(rng);

    // Group of m users on LED 0; one outsider on LED 1 provides cross-signal
    // interference with a beta-free gain.
    const int n_users = m + 1;
    std::vector<std::vector<int>> led_users(2);
    for (int k = 0; k < m; ++k) led_users[0].push_back(k);
    led_users[1].push_back(m);

    std::vector<std::vector<double>> est(n_users, std::vector<double>(2, 0.0));
    for (int k = 0; k < m; ++k) {
      est[k][0] = std::pow(10.0, -6.5 + 2.5 * unit(rng));
      est[k][1] = unit(rng) < 0.5 ? 0.0 : std::pow(10.0, -7.5 + 2.5 * unit(rng));
    }
    est[m][1] = std::pow(10.0, -6.5 + 2.5 * unit(rng));

    const double power = std::pow(10.0, -1.0 + 2.0 * unit(rng));

    noma::GroupAssignment ga = noma::make_assignment(2, n_users, led_users);
    noma::assign_sic_orders(ga, est);
    const noma::SignalGroup& group = ga.groups[0];

    const noma::PowerAllocation solved = noma::optimize_allocation(
        group, ga, est, power, kNoiseVar, noma::InterferenceSet::physical);

    // Rebuild the objective coefficients independently: squared serving gain
    // and beta-free interference plus scaled noise, per decode position.
    std::vector<double> a(m), c(m);
    for (int pos = 0; pos < m; ++pos) {
      const int k = group.sic_order[pos];
      const double amp = est[k][0];
      a[pos] = amp * amp;
      const double cross = est[k][1];
      c[pos] = cross * cross + kNoiseVar / power;
    }

    const double got = grid_objective(a, c, solved.betas);
    const double best = grid_best(a, c);
    if (best > 0.0) {
      report.worst_objective_ratio = std::min(report.worst_objective_ratio, got / best);
    }

    double sum = 0.0;
    double violation = 0.0;
    for (int pos = 0; pos < m; ++pos) {
      sum += solved.betas[pos];
      violation = std::max(violation, -solved.betas[pos]);
      if (pos + 1 < m) {
        violation = std::max(violation, solved.betas[pos + 1] - solved.betas[pos]);
      }
    }
    violation = std::max(violation, sum - 1.0);
    report.max_feasibility_violation =
        std::max(report.max_feasibility_violation, violation);
    if (sum > 1.0 - 1e-6) ++report.budget_saturated;
  }

  report.pass = report.worst_objective_ratio >= 0.99 &&
                report.max_feasibility_violation <= 1e-9;
  return report;
}

std::string AllocReport::describe() const {
  std::ostringstream out;
  out << "alloc: cases=" << cases
      << " worst_objective_ratio=" << worst_objective_ratio
      << " max_feasibility_violation=" << max_feasibility_violation
      << " budget_saturated=" << budget_saturated << "/" << cases
      << (pass ? " PASS" : " FAIL");
  return out.str();
}

// ---------------------------------------------------------------------------
// Azimuth argmax

namespace {

// Estimated gain at an explicit device azimuth, evaluated from the raw
// formula with the mean polar angle.
double estimated_gain_at(const Vec3& s, const Vec3& d_pos, double omega,
                         const channel::LedParams& led, const channel::PdParams& pd) {
  const double lambda = channel::deg2rad(channel::kPolarMeanDeg);
  const Vec3 diff = s - d_pos;
  const double dist = diff.norm();
  const double cos_psi = (diff.x / dist) * std::sin(lambda) * std::cos(omega) +
                         (diff.y / dist) * std::sin(lambda) * std::sin(omega) +
                         (diff.z / dist) * std::cos(lambda);
  if (cos_psi <= 0.0) return 0.0;
  const double psi = std::acos(std::min(cos_psi, 1.0));
  if (psi > pd.fov) return 0.0;
  const double g = pd.refractive_index * pd.refractive_index /
                   (std::sin(pd.fov) * std::sin(pd.fov));
  const double cos_theta = diff.z / dist;
  return pd.area * (led.lambertian_m + 1.0) * pd.responsivity / (2.0 * M_PI) *
         std::pow(cos_theta, led.lambertian_m) * cos_psi / (dist * dist) * g;
}

}  // namespace

AzimuthReport run_azimuth(long long n, std::uint64_t seed) {
  std::mt19937_64 rng = make_trial_rng(seed, 0xA21);
  std::uniform_real_distribution<double> in_room(0.0, kRoom);

  channel::LedParams led;
  led.half_angle = channel::deg2rad(70.0);
  led.lambertian_m = channel::lambertian_order(led.half_angle);
  channel::PdParams pd;
  pd.area = 1e-4;
  pd.fov = channel::deg2rad(60.0);
  pd.refractive_index = 1.5;
  pd.responsivity = 1.0;

  AzimuthReport report;
  report.cases = n;
  for (long long i = 0; i < n; ++i) {
    const Vec3 s{in_room(rng), in_room(rng), kCeiling};
    const Vec3 d{in_room(rng), in_room(rng), kDeviceZ};
    led.position = s;

    double grid_best_gain = 0.0;
    for (int k = 0; k < 3600; ++k) {
      const double omega = 2.0 * M_PI * k / 3600.0;
      grid_best_gain = std::max(grid_best_gain, estimated_gain_at(s, d, omega, led, pd));
    }

    const double closed_form = estimated_gain_at(s, d, channel::estimated_azimuth(s, d),
                                                 led, pd);
    const double scale = std::max(grid_best_gain, 1e-300);
    report.max_rel_gain_gap =
        std::max(report.max_rel_gain_gap, (grid_best_gain - closed_form) / scale);

    const double engine = channel::estimated_channel_gain(s, d, led, pd);
    report.max_rel_eval_error =
        std::max(report.max_rel_eval_error, rel_gap(engine, closed_form));
  }

  report.pass = report.max_rel_gain_gap <= 1e-9 && report.max_rel_eval_error <= 1e-12;
  return report;
}

std::string AzimuthReport::describe() const {
  std::ostringstream out;
  out << "azimuth: cases=" << cases << " max_rel_gain_gap=" << max_rel_gain_gap
      << " max_rel_eval_error=" << max_rel_eval_error << (pass ? " PASS" : " FAIL");
  return out.str();
}

}  // namespace oracle
