#pragma once

#include <array>
#include <optional>

#include "vlcsec/vec3.hpp"

namespace vlcsec::geom {

/// Relative threshold on |dir . normal| (both vectors normalized) below which
/// a line and a plane are treated as parallel.
inline constexpr double kParallelEps = 1e-12;

struct Plane {
  Vec3 point;
  Vec3 normal;
};

/// Vertical solid cylinder standing on the floor, described by the center of
/// its top face. Invariant: top_center.z == height, radius > 0.
struct BodyCylinder {
  Vec3 top_center;
  double radius = 0.0;
  double height = 0.0;
};

/// Intersection of the line through `origin` with direction `dir` and `plane`.
/// Empty when the line is parallel to the plane (intersection undefined).
std::optional<Vec3> line_plane_intersection(const Vec3& origin, const Vec3& dir,
                                            const Plane& plane);

/// First-quadrant azimuth between an LED and a cylinder axis on the XOY plane,
/// atan(|dy| / |dx|) in [0, pi/2]. Empty when the LED stands exactly above the
/// axis (horizontal projection distance zero); callers then fall back to the
/// top-disk test alone.
std::optional<double> azimuth_to_body(const Vec3& led, const Vec3& body_top);

/// Corners of the rectangle obtained by projecting the cylinder onto the
/// vertical plane through its axis, for offset azimuth `phi`: two top corners
/// at z = height first, then the two floor corners, each displaced by
/// (+-r cos phi, -+r sin phi) from the axis.
std::array<Vec3, 4> rect_projection_vertices(const BodyCylinder& body, double phi);

/// Top-face center of the body cylinder carrying a handheld device: the body
/// axis sits at horizontal distance sqrt(l_d^2 + (H - z_D)^2) from the device,
/// along the device azimuth.
Vec3 body_top_center(const Vec3& pd, double azimuth, double device_offset,
                     double body_height);

/// True when the straight light path from `led` down to `pd` passes through
/// `body`. Expects led.z > body.height >= pd.z; only the segment between the
/// endpoints counts, crossings beyond them do not block.
bool is_blocked(const Vec3& led, const Vec3& pd, const BodyCylinder& body);

}  // namespace vlcsec::geom
