#include <doctest.h>

#include <cmath>
#include <random>

#include "vlcsec/channel.hpp"
#include "vlcsec/rng.hpp"

using namespace vlcsec;
using channel::deg2rad;
using channel::Orientation;

namespace {

channel::LedParams table_led(const Vec3& pos) {
  channel::LedParams led;
  led.half_angle = deg2rad(70.0);
  led.lambertian_m = channel::lambertian_order(led.half_angle);
  led.position = pos;
  return led;
}

channel::PdParams table_pd() {
  channel::PdParams pd;
  pd.area = 1e-4;
  pd.fov = deg2rad(60.0);
  pd.refractive_index = 1.5;
  pd.responsivity = 1.0;
  return pd;
}

}  // namespace

TEST_CASE("lambertian_order at exact and tabulated angles") {
  CHECK(channel::lambertian_order(deg2rad(60.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(channel::lambertian_order(deg2rad(45.0)) == doctest::Approx(2.0).epsilon(1e-12));
  const double m70 = channel::lambertian_order(deg2rad(70.0));
  CHECK(m70 == doctest::Approx(0.6461).epsilon(1e-3));
  CHECK(m70 == doctest::Approx(-std::log(2.0) / std::log(std::cos(deg2rad(70.0))))
                   .epsilon(1e-15));
}

TEST_CASE("incidence_cos for canonical orientations") {
  // Device flat on its back right under the LED.
  CHECK(channel::incidence_cos({5, 5, 3.98}, {5, 5, 0.85}, {0.3, 0.0}) ==
        doctest::Approx(1.0));
  // Device face vertical, pointing away from the LED bearing.
  const double away = channel::incidence_cos({0, 0, 3.98}, {10, 0, 0.85},
                                             {0.0, M_PI / 2.0});
  CHECK(away <= 0.0);
}

TEST_CASE("incidence_cos against a direct transcription") {
  const Vec3 s{20, 20, 3.98};
  const Vec3 d{13, 16, 0.85};
  const Orientation o{std::atan2(4.0, 7.0), deg2rad(29.67)};
  const double dist = (s - d).norm();
  const double want = ((s.x - d.x) / dist) * std::sin(o.polar) * std::cos(o.azimuth) +
                      ((s.y - d.y) / dist) * std::sin(o.polar) * std::sin(o.azimuth) +
                      ((s.z - d.z) / dist) * std::cos(o.polar);
  CHECK(channel::incidence_cos(s, d, o) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("incidence_cos ignores azimuth at zero polar angle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  std::uniform_real_distribution<double> w(-M_PI, M_PI);
  for (int i = 0; i < 200; ++i) {
    const Vec3 s{u(rng), u(rng), 3.98};
    const Vec3 d{u(rng), u(rng), 0.85};
    const double dist = (s - d).norm();
    CHECK(channel::incidence_cos(s, d, {w(rng), 0.0}) ==
          doctest::Approx((s.z - d.z) / dist).epsilon(1e-12));
  }
}

TEST_CASE("concentrator_gain window") {
  CHECK(channel::concentrator_gain(deg2rad(30), deg2rad(60), 1.5) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(channel::concentrator_gain(deg2rad(60), deg2rad(60), 1.5) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(channel::concentrator_gain(deg2rad(61), deg2rad(60), 1.5) == 0.0);
}

TEST_CASE("channel_gain overhead reference value") {
  const auto led = table_led({10, 10, 3.98});
  const auto pd = table_pd();
  const auto rx = channel::make_receiver(0, {10, 10, 0.85}, {0.7, 0.0}, 0.4, 1.6, 0.2);
  const double h = channel::channel_gain(led, rx, {}, pd);
  const double d2 = 3.13 * 3.13;
  const double want = 1e-4 * (led.lambertian_m + 1.0) / (2.0 * M_PI) / d2 * 3.0;
  CHECK(h == doctest::Approx(want).epsilon(1e-12));
  CHECK(h == doctest::Approx(8.02e-6).epsilon(1e-2));
}

TEST_CASE("channel_gain zero outside the field of view and behind the surface") {
  const auto led = table_led({0, 0, 3.98});
  const auto pd = table_pd();
  // Face tipped fully sideways away from the LED bearing.
  const auto facing_away =
      channel::make_receiver(0, {20, 0, 0.85}, {0.0, M_PI / 2.0}, 0.4, 1.6, 0.2);
  CHECK(channel::channel_gain(led, facing_away, {}, pd) == 0.0);
  // Flat device far away: incidence exceeds the 60 degree field of view.
  const auto far_flat = channel::make_receiver(0, {30, 0, 0.85}, {0.0, 0.0}, 0.4, 1.6, 0.2);
  CHECK(channel::channel_gain(led, far_flat, {}, pd) == 0.0);
}

TEST_CASE("channel_gain annihilated by a blocking body") {
  const auto led = table_led({10, 10, 3.98});
  const auto pd = table_pd();
  const auto rx = channel::make_receiver(0, {14, 10, 0.85}, {M_PI, 0.2}, 0.4, 1.6, 0.2);
  CHECK(channel::channel_gain(led, rx, {}, pd) > 0.0);
  // Standing on the below-top part of the path (the segment dips under the
  // 1.6 m cylinder top only past x = 13.04).
  const geom::BodyCylinder blocker{{13.5, 10, 1.6}, 0.2, 1.6};
  const std::vector<geom::BodyCylinder> bodies{blocker};
  CHECK(channel::channel_gain(led, rx, bodies, pd) == 0.0);
}

TEST_CASE("channel_gain decays with distance at fixed angles") {
  const auto pd = table_pd();
  const auto rx = channel::make_receiver(0, {10, 10, 0.85}, {0.0, 0.0}, 0.4, 1.6, 0.2);
  const double h3 = channel::channel_gain(table_led({10, 10, 3.85}), rx, {}, pd);
  const double h4 = channel::channel_gain(table_led({10, 10, 4.85}), rx, {}, pd);
  CHECK(h3 > h4);
}

TEST_CASE("channel_gain equals the product of its factors") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  const auto pd = table_pd();
  for (int i = 0; i < 500; ++i) {
    const Vec3 s{u(rng), u(rng), 3.98};
    const Vec3 d{u(rng), u(rng), 0.85};
    const Orientation o = channel::sample_orientation(rng);
    const auto led = table_led(s);
    const auto rx = channel::make_receiver(0, d, o, 0.4, 1.6, 0.2);
    const double h = channel::channel_gain(led, rx, {}, pd);
    const double cos_psi = channel::incidence_cos(s, d, o);
    if (cos_psi <= 0.0) {
      CHECK(h == 0.0);
      continue;
    }
    const double psi = std::acos(std::min(cos_psi, 1.0));
    const double g = channel::concentrator_gain(psi, pd.fov, pd.refractive_index);
    const double dist2 = (s - d).squared_norm();
    const double cos_theta = (s.z - d.z) / std::sqrt(dist2);
    const double want = pd.area * (led.lambertian_m + 1.0) * pd.responsivity /
                        (2.0 * M_PI) * std::pow(cos_theta, led.lambertian_m) * cos_psi /
                        dist2 * g;
    CHECK(h == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("sample_orientation matches the handheld statistics") {
  std::mt19937_64 rng = make_trial_rng(424242, 0);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0, cos_sum = 0.0, sin_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Orientation o = channel::sample_orientation(rng);
    REQUIRE(o.polar >= 0.0);
    REQUIRE(o.polar <= M_PI / 2.0);
    REQUIRE(o.azimuth >= -M_PI);
    REQUIRE(o.azimuth < M_PI);
    const double deg = o.polar * 180.0 / M_PI;
    sum += deg;
    sum2 += deg * deg;
    cos_sum += std::cos(o.azimuth);
    sin_sum += std::sin(o.azimuth);
  }
  const double mean = sum / n;
  const double stddev = std::sqrt((sum2 - n * mean * mean) / (n - 1));
  CHECK(std::abs(mean - 29.67) < 0.1);
  CHECK(std::abs(stddev - 7.78) < 0.1);
  CHECK(std::abs(cos_sum / n) < 0.01);
  CHECK(std::abs(sin_sum / n) < 0.01);
}

TEST_CASE("estimated_channel_gain under the LED sees the mean polar angle") {
  const auto led = table_led({10, 10, 3.98});
  const auto pd = table_pd();
  const double h =
      channel::estimated_channel_gain({10, 10, 3.98}, {10, 10, 0.85}, led, pd);
  const double lambda = deg2rad(channel::kPolarMeanDeg);
  const double want = 1e-4 * (led.lambertian_m + 1.0) / (2.0 * M_PI) *
                      std::cos(lambda) / (3.13 * 3.13) * 3.0;
  CHECK(h == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("estimated gain equals the realized gain at the estimate's angles") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  const auto pd = table_pd();
  for (int i = 0; i < 500; ++i) {
    const Vec3 s{u(rng), u(rng), 3.98};
    const Vec3 d{u(rng), u(rng), 0.85};
    const auto led = table_led(s);
    const Orientation best{channel::estimated_azimuth(s, d),
                           deg2rad(channel::kPolarMeanDeg)};
    const auto rx = channel::make_receiver(0, d, best, 0.4, 1.6, 0.2);
    const double realized = channel::channel_gain(led, rx, {}, pd);
    const double estimated = channel::estimated_channel_gain(s, d, led, pd);
    CHECK(estimated == doctest::Approx(realized).epsilon(1e-12));
  }
}

TEST_CASE("estimated_channel_gain is rotation invariant about the LED axis") {
  const auto pd = table_pd();
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(5.0, 35.0);
  std::uniform_real_distribution<double> turn(-M_PI, M_PI);
  for (int i = 0; i < 200; ++i) {
    const Vec3 s{u(rng), u(rng), 3.98};
    const Vec3 d{u(rng), u(rng), 0.85};
    const auto led = table_led(s);
    const double base = channel::estimated_channel_gain(s, d, led, pd);
    const double angle = turn(rng);
    const double c = std::cos(angle), sn = std::sin(angle);
    const Vec3 rotated{s.x + c * (d.x - s.x) - sn * (d.y - s.y),
                       s.y + sn * (d.x - s.x) + c * (d.y - s.y), d.z};
    CHECK(channel::estimated_channel_gain(s, rotated, led, pd) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}
