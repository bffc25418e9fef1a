#pragma once

#include <span>
#include <vector>

#include "vlcsec/noma.hpp"
#include "vlcsec/vec3.hpp"

namespace vlcsec::topology {

struct RoomLayout {
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;
  double device_plane_z = 0.0;
  std::vector<Vec3> led_positions;  // all at z == height
};

enum class Strategy { broadcasting, simple_linking, smart_linking };

enum class LatticeKind { triangular, square };

struct LatticeSpec {
  LatticeKind kind = LatticeKind::triangular;
  double side = 0.0;
  double anchor_x = 0.0;
  double anchor_y = 0.0;
};

/// Radius of the floor-level disk illuminated within the half-intensity cone:
/// (ceiling - device plane) * tan(theta_half).
double coverage_radius(double ceiling_z, double device_z, double theta_half);

/// Equilateral-triangle lattice clipped to the closed room box, rows spaced by
/// side * sqrt(3)/2 with alternate rows offset by side/2, sorted by (y, x).
/// The anchor point is always a vertex. Throws RangeError when the side
/// exceeds sqrt(3) * (ceiling_z - device_z) * tan(theta_half), which would
/// leave gaps between coverage disks.
std::vector<Vec3> triangular_lattice(double length, double width, double ceiling_z,
                                     double device_z, double theta_half, double side,
                                     double anchor_x, double anchor_y);

/// Square grid clipped to the closed room box, sorted by (y, x).
std::vector<Vec3> square_lattice(double length, double width, double ceiling_z,
                                 double side, double anchor_x, double anchor_y);

/// Serving sets per LED under the given strategy:
///  - broadcasting: every LED carries every user;
///  - simple linking: each LED carries the users inside its coverage disk
///    (boundary included);
///  - smart linking: coverage groups that share a user are merged, and every
///    LED of a merged cluster carries the cluster's full user set.
/// SIC orders are left empty; fill them once estimated gains are known.
noma::GroupAssignment assign_groups(Strategy strategy, std::span<const Vec3> leds,
                                    std::span<const Vec3> users, double coverage_r);

}  // namespace vlcsec::topology
