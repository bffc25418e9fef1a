#include "vlcsec/geom.hpp"

#include <cmath>

namespace vlcsec::geom {

namespace {

// Parameter t of the crossing point origin + t * dir with the plane, restricted
// to the segment t in [0, 1]. Empty when parallel or out of range.
std::optional<double> segment_plane_param(const Vec3& origin, const Vec3& dir,
                                          const Plane& plane) {
  const double denom = dir.dot(plane.normal);
  if (std::abs(denom) <= kParallelEps * dir.norm() * plane.normal.norm()) {
    return std::nullopt;
  }
  const double t = (plane.point - origin).dot(plane.normal) / denom;
  if (t < 0.0 || t > 1.0) return std::nullopt;
  return t;
}

bool inside_rect(const std::array<Vec3, 4>& b, const Vec3& p) {
  const double s1 = (b[1] - b[0]).cross(p - b[0]).dot((b[3] - b[2]).cross(p - b[2]));
  const double s2 = (b[2] - b[1]).cross(p - b[1]).dot((b[0] - b[3]).cross(p - b[3]));
  return s1 >= 0.0 && s2 >= 0.0;
}

}  // namespace

std::optional<Vec3> line_plane_intersection(const Vec3& origin, const Vec3& dir,
                                            const Plane& plane) {
  const double denom = dir.dot(plane.normal);
  if (std::abs(denom) <= kParallelEps * dir.norm() * plane.normal.norm()) {
    return std::nullopt;
  }
  const double t = (plane.point - origin).dot(plane.normal) / denom;
  return origin + t * dir;
}

std::optional<double> azimuth_to_body(const Vec3& led, const Vec3& body_top) {
  const double dx = std::abs(led.x - body_top.x);
  const double dy = std::abs(led.y - body_top.y);
  if (dx == 0.0 && dy == 0.0) return std::nullopt;
  return std::atan2(dy, dx);
}

std::array<Vec3, 4> rect_projection_vertices(const BodyCylinder& body, double phi) {
  const double ox = body.radius * std::cos(phi);
  const double oy = body.radius * std::sin(phi);
  const Vec3& u = body.top_center;
  return {Vec3{u.x + ox, u.y - oy, body.height},
          Vec3{u.x - ox, u.y + oy, body.height},
          Vec3{u.x - ox, u.y + oy, 0.0},
          Vec3{u.x + ox, u.y - oy, 0.0}};
}

Vec3 body_top_center(const Vec3& pd, double azimuth, double device_offset,
                     double body_height) {
  const double dz = body_height - pd.z;
  const double reach = std::sqrt(device_offset * device_offset + dz * dz);
  return {pd.x + reach * std::cos(azimuth), pd.y + reach * std::sin(azimuth),
          body_height};
}

bool is_blocked(const Vec3& led, const Vec3& pd, const BodyCylinder& body) {
  const Vec3 ray = pd - led;
  const Vec3& u = body.top_center;
  const double r = body.radius;

  // Path endpoint inside the cylinder: neither crossing test below can see
  // this, the segment terminates before reaching the silhouette plane.
  const double ex = pd.x - u.x;
  const double ey = pd.y - u.y;
  if (pd.z <= body.height && ex * ex + ey * ey <= r * r) return true;

  // Crossing of the horizontal plane through the cylinder top, inside the disk.
  if (auto t = segment_plane_param(led, ray, Plane{u, {0.0, 0.0, 1.0}})) {
    const Vec3 q = led + *t * ray;
    if ((q - u).norm() <= r) return true;
  }

  // LED exactly above the axis: radial distance from the axis only grows along
  // the descending ray, so the top-disk test above is exhaustive.
  if (led.x == u.x && led.y == u.y) return false;

  // Vertical ray: no silhouette plane is defined, top-disk test is exhaustive.
  if (ray.x == 0.0 && ray.y == 0.0) return false;

  // Crossing of the vertical projection rectangle. The rectangle's horizontal
  // extent must run perpendicular to the ray's horizontal direction for the
  // corner tests to trace the cylinder silhouette; phi below places the vertex
  // offsets (+-r cos phi, -+r sin phi) along that perpendicular.
  const double phi = std::atan2(-ray.x, -ray.y);
  const auto corners = rect_projection_vertices(body, phi);
  const Plane silhouette{u, Vec3{ray.x, ray.y, 0.0}};
  if (auto t = segment_plane_param(led, ray, silhouette)) {
    if (inside_rect(corners, led + *t * ray)) return true;
  }
  return false;
}

}  // namespace vlcsec::geom
