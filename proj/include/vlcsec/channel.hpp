#pragma once

#include <random>
#include <span>

#include "vlcsec/geom.hpp"
#include "vlcsec/vec3.hpp"

namespace vlcsec::channel {

/// Device orientation statistics for handheld use: polar angle Gaussian with
/// the mean/stddev below (degrees), azimuth uniform on [-pi, pi).
inline constexpr double kPolarMeanDeg = 29.67;
inline constexpr double kPolarStdDeg = 7.78;

inline constexpr double deg2rad(double deg) { return deg * M_PI / 180.0; }

struct LedParams {
  double half_angle = 0.0;    // half-intensity angle, radians
  double lambertian_m = 0.0;  // emission order derived from half_angle
  Vec3 position;
};

struct PdParams {
  double area = 0.0;              // photosensitive area, m^2
  double fov = 0.0;               // field of view, radians
  double refractive_index = 0.0;  // concentrator index, in (1, 2)
  double responsivity = 1.0;      // A/W
};

struct Orientation {
  double azimuth = 0.0;  // omega in [-pi, pi)
  double polar = 0.0;    // lambda in [0, pi/2]
};

/// Receiver id for the eavesdropper; legitimate users use indices 0..K-1.
inline constexpr int kEavesdropper = -1;

struct Receiver {
  int id = 0;
  Vec3 pd_position;
  Orientation orientation;
  geom::BodyCylinder body;
};

/// Lambertian emission order -ln 2 / ln(cos(theta_half)).
double lambertian_order(double theta_half);

/// Builds a receiver whose body cylinder is placed from the device position
/// and azimuth (the user holds the device at horizontal offset `device_offset`
/// from the body axis).
Receiver make_receiver(int id, const Vec3& pd_position, const Orientation& o,
                       double device_offset, double body_height, double body_radius);

/// Cosine of the incidence angle at the photosensitive surface for a device
/// tilted by `o`; negative when the light arrives from behind the surface.
double incidence_cos(const Vec3& led_pos, const Vec3& pd_pos, const Orientation& o);

/// Optical concentrator gain: eta^2 / sin^2(fov) inside the field of view
/// (boundary included), zero beyond it.
double concentrator_gain(double psi, double fov, double refractive_index);

/// Line-of-sight channel gain from an LED to a receiver. Zero when the surface
/// faces away, the incidence falls outside the field of view, or any of the
/// bodies (including the receiver's own) blocks the path.
double channel_gain(const LedParams& led, const Receiver& rx,
                    std::span<const geom::BodyCylinder> bodies, const PdParams& pd);

/// Draws a device orientation: azimuth uniform, polar Gaussian clamped into
/// [0, pi/2]. Draw order is azimuth first; the clamp keeps every draw.
Orientation sample_orientation(std::mt19937_64& rng);

/// Azimuth that maximizes the estimated gain for a device at D served by an
/// LED at S: the device points its tilt toward the LED's horizontal bearing.
double estimated_azimuth(const Vec3& led_pos, const Vec3& pd_pos);

/// Channel gain estimate available to the transmitter: mean polar angle,
/// best-case azimuth, and no blockage knowledge.
double estimated_channel_gain(const Vec3& led_pos, const Vec3& pd_pos,
                              const LedParams& led, const PdParams& pd);

}  // namespace vlcsec::channel
