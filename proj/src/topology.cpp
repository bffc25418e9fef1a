#include "vlcsec/topology.hpp"

#include <algorithm>
#include <cmath>

#include "vlcsec/errors.hpp"

namespace vlcsec::topology {

namespace {

constexpr double kClipTol = 1e-9;  // keeps lattice points that land exactly on a wall

// Inclusive integer range of i such that 0 <= start + i * step <= limit.
std::pair<long, long> index_range(double start, double step, double limit) {
  const long lo = static_cast<long>(std::ceil((0.0 - start) / step - kClipTol));
  const long hi = static_cast<long>(std::floor((limit - start) / step + kClipTol));
  return {lo, hi};
}

void sort_by_row(std::vector<Vec3>& points) {
  std::sort(points.begin(), points.end(), [](const Vec3& a, const Vec3& b) {
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
}

bool covers(const Vec3& led, const Vec3& user, double radius) {
  const double dx = user.x - led.x;
  const double dy = user.y - led.y;
  return dx * dx + dy * dy <= radius * radius;
}

}  // namespace

double coverage_radius(double ceiling_z, double device_z, double theta_half) {
  return (ceiling_z - device_z) * std::tan(theta_half);
}

std::vector<Vec3> triangular_lattice(double length, double width, double ceiling_z,
                                     double device_z, double theta_half, double side,
                                     double anchor_x, double anchor_y) {
  const double max_side = std::sqrt(3.0) * coverage_radius(ceiling_z, device_z, theta_half);
  if (side > max_side) {
    throw RangeError("triangular_lattice: side exceeds the coverage bound sqrt(3) * (Z - z_D) * tan(theta_half)");
  }
  const double row_pitch = side * std::sqrt(3.0) / 2.0;
  std::vector<Vec3> points;
  const auto [j_lo, j_hi] = index_range(anchor_y, row_pitch, width);
  for (long j = j_lo; j <= j_hi; ++j) {
    const double y = anchor_y + static_cast<double>(j) * row_pitch;
    const double x_start = anchor_x + ((j % 2 != 0) ? side / 2.0 : 0.0);
    const auto [i_lo, i_hi] = index_range(x_start, side, length);
    for (long i = i_lo; i <= i_hi; ++i) {
      points.emplace_back(x_start + static_cast<double>(i) * side, y, ceiling_z);
    }
  }
  sort_by_row(points);
  return points;
}

std::vector<Vec3> square_lattice(double length, double width, double ceiling_z,
                                 double side, double anchor_x, double anchor_y) {
  if (side <= 0.0) throw RangeError("square_lattice: side must be positive");
  std::vector<Vec3> points;
  const auto [j_lo, j_hi] = index_range(anchor_y, side, width);
  for (long j = j_lo; j <= j_hi; ++j) {
    const double y = anchor_y + static_cast<double>(j) * side;
    const auto [i_lo, i_hi] = index_range(anchor_x, side, length);
    for (long i = i_lo; i <= i_hi; ++i) {
      points.emplace_back(anchor_x + static_cast<double>(i) * side, y, ceiling_z);
    }
  }
  sort_by_row(points);
  return points;
}

noma::GroupAssignment assign_groups(Strategy strategy, std::span<const Vec3> leds,
                                    std::span<const Vec3> users, double coverage_r) {
  const int n_leds = static_cast<int>(leds.size());
  const int n_users = static_cast<int>(users.size());
  std::vector<std::vector<int>> led_users(n_leds);

  if (strategy == Strategy::broadcasting) {
    std::vector<int> everyone(n_users);
    for (int k = 0; k < n_users; ++k) everyone[k] = k;
    for (auto& set : led_users) set = everyone;
    return noma::make_assignment(n_leds, n_users, std::move(led_users));
  }

  for (int n = 0; n < n_leds; ++n) {
    for (int k = 0; k < n_users; ++k) {
      if (covers(leds[n], users[k], coverage_r)) led_users[n].push_back(k);
    }
  }
  if (strategy == Strategy::simple_linking) {
    return noma::make_assignment(n_leds, n_users, std::move(led_users));
  }

  // Smart linking: sweep the LEDs once, merging the running set of the current
  // LED with every earlier cluster it shares a user with, then overwrite those
  // clusters with the merged set. The overwrite closes chains transitively.
  std::vector<std::vector<int>> merged(n_leds);
  for (int n = 0; n < n_leds; ++n) {
    std::vector<int> current = led_users[n];
    std::vector<int> absorbed;
    for (int l = 0; l < n; ++l) {
      const bool overlap = std::any_of(merged[l].begin(), merged[l].end(), [&](int k) {
        return std::binary_search(current.begin(), current.end(), k);
      });
      if (overlap) {
        absorbed.push_back(l);
        std::vector<int> unioned;
        std::set_union(merged[l].begin(), merged[l].end(), current.begin(),
                       current.end(), std::back_inserter(unioned));
        current = std::move(unioned);
      }
    }
    for (int l : absorbed) merged[l] = current;
    merged[n] = std::move(current);
  }
  return noma::make_assignment(n_leds, n_users, std::move(merged));
}

}  // namespace vlcsec::topology
