#include "vlcsec/channel.hpp"

#include <algorithm>
#include <cmath>

namespace vlcsec::channel {

double lambertian_order(double theta_half) {
  return -std::log(2.0) / std::log(std::cos(theta_half));
}

Receiver make_receiver(int id, const Vec3& pd_position, const Orientation& o,
                       double device_offset, double body_height, double body_radius) {
  Receiver rx;
  rx.id = id;
  rx.pd_position = pd_position;
  rx.orientation = o;
  rx.body.top_center =
      geom::body_top_center(pd_position, o.azimuth, device_offset, body_height);
  rx.body.radius = body_radius;
  rx.body.height = body_height;
  return rx;
}

double incidence_cos(const Vec3& led_pos, const Vec3& pd_pos, const Orientation& o) {
  const Vec3 to_led = led_pos - pd_pos;
  const double d = to_led.norm();
  const double sin_l = std::sin(o.polar);
  return (to_led.x / d) * sin_l * std::cos(o.azimuth) +
         (to_led.y / d) * sin_l * std::sin(o.azimuth) +
         (to_led.z / d) * std::cos(o.polar);
}

double concentrator_gain(double psi, double fov, double refractive_index) {
  if (psi < 0.0 || psi > fov) return 0.0;
  const double s = std::sin(fov);
  return refractive_index * refractive_index / (s * s);
}

namespace {

// Gain factors shared by the realized and the estimated channel: emission,
// incidence, spreading, and concentrator. Zero for non-illuminating geometry.
double unblocked_gain(const Vec3& led_pos, const Vec3& pd_pos, double cos_psi,
                      const LedParams& led, const PdParams& pd) {
  if (cos_psi <= 0.0) return 0.0;
  const double psi = std::acos(std::min(cos_psi, 1.0));
  const double g = concentrator_gain(psi, pd.fov, pd.refractive_index);
  if (g == 0.0) return 0.0;
  const Vec3 diff = led_pos - pd_pos;
  const double d2 = diff.squared_norm();
  const double d = std::sqrt(d2);
  const double cos_theta = diff.z / d;
  return pd.area * (led.lambertian_m + 1.0) * pd.responsivity / (2.0 * M_PI) *
         std::pow(cos_theta, led.lambertian_m) * cos_psi / d2 * g;
}

}  // namespace

double channel_gain(const LedParams& led, const Receiver& rx,
                    std::span<const geom::BodyCylinder> bodies, const PdParams& pd) {
  const double cos_psi = incidence_cos(led.position, rx.pd_position, rx.orientation);
  const double h = unblocked_gain(led.position, rx.pd_position, cos_psi, led, pd);
  if (h == 0.0) return 0.0;
  for (const auto& body : bodies) {
    if (geom::is_blocked(led.position, rx.pd_position, body)) return 0.0;
  }
  return h;
}

Orientation sample_orientation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> azimuth(-M_PI, M_PI);
  std::normal_distribution<double> polar(deg2rad(kPolarMeanDeg), deg2rad(kPolarStdDeg));
  Orientation o;
  o.azimuth = azimuth(rng);
  o.polar = std::clamp(polar(rng), 0.0, M_PI / 2.0);
  return o;
}

double estimated_azimuth(const Vec3& led_pos, const Vec3& pd_pos) {
  return std::atan2(led_pos.y - pd_pos.y, led_pos.x - pd_pos.x);
}

double estimated_channel_gain(const Vec3& led_pos, const Vec3& pd_pos,
                              const LedParams& led, const PdParams& pd) {
  const Orientation o{estimated_azimuth(led_pos, pd_pos), deg2rad(kPolarMeanDeg)};
  const double cos_psi = incidence_cos(led_pos, pd_pos, o);
  return unblocked_gain(led_pos, pd_pos, cos_psi, led, pd);
}

}  // namespace vlcsec::channel
