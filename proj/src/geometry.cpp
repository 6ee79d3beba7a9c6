#include "perispace/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "perispace/error.hpp"

namespace perispace {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Aabb segment_bounds(const Vec3& a, const Vec3& b, double r) {
  return {a.cwiseMin(b).array() - r, a.cwiseMax(b).array() + r};
}

// Flat caps: the rim discs reach r * sqrt(1 - n_i^2) along axis i.
Aabb cylinder_bounds(const Cylinder& c) {
  const Vec3 n = (c.b - c.a).normalized();
  const Vec3 reach = c.radius * (Vec3::Ones() - n.cwiseProduct(n)).cwiseMax(0.0).cwiseSqrt();
  return {c.a.cwiseMin(c.b) - reach, c.a.cwiseMax(c.b) + reach};
}

// Farthest point of a disc (centre c, unit normal n, radius r) from p.
double disc_max_distance(const Vec3& c, const Vec3& n, double r, const Vec3& p) {
  const Vec3 v = c - p;
  const double h = v.dot(n);
  const double perp = (v - h * n).norm();
  return std::hypot(h, perp + r);
}

}  // namespace

double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool contains(const Box& s, const Vec3& p) {
  return ((p - s.center).cwiseAbs().array() <= s.half_extents.array()).all();
}

bool contains(const Sphere& s, const Vec3& p) {
  return (p - s.center).squaredNorm() <= s.radius * s.radius;
}

bool contains(const Capsule& s, const Vec3& p) {
  return segment_distance(p, s.a, s.b) <= s.radius;
}

bool contains(const Cylinder& s, const Vec3& p) {
  const Vec3 ab = s.b - s.a;
  const double len2 = ab.squaredNorm();
  const double t = (p - s.a).dot(ab) / len2;
  if (t < 0.0 || t > 1.0) return false;
  return (p - (s.a + t * ab)).squaredNorm() <= s.radius * s.radius;
}

bool contains(const Primitive& s, const Vec3& p) {
  return std::visit([&](const auto& shape) { return contains(shape, p); }, s);
}

Aabb bounds(const Primitive& s) {
  return std::visit(
      Overloaded{
          [](const Box& b) -> Aabb { return {b.center - b.half_extents, b.center + b.half_extents}; },
          [](const Sphere& b) -> Aabb { return {b.center.array() - b.radius, b.center.array() + b.radius}; },
          [](const Capsule& b) { return segment_bounds(b.a, b.b, b.radius); },
          [](const Cylinder& b) { return cylinder_bounds(b); },
      },
      s);
}

double max_distance_from(const Primitive& s, const Vec3& origin) {
  return std::visit(
      Overloaded{
          [&](const Box& b) {
            const Vec3 far = (b.center - origin).cwiseAbs() + b.half_extents;
            return far.norm();
          },
          [&](const Sphere& b) { return (b.center - origin).norm() + b.radius; },
          [&](const Capsule& b) {
            return std::max((b.a - origin).norm(), (b.b - origin).norm()) + b.radius;
          },
          [&](const Cylinder& b) {
            const Vec3 n = (b.b - b.a).normalized();
            return std::max(disc_max_distance(b.a, n, b.radius, origin),
                            disc_max_distance(b.b, n, b.radius, origin));
          },
      },
      s);
}

void validate(const Primitive& s, const std::string& what) {
  std::visit(
      Overloaded{
          [&](const Box& b) {
            if (!(b.half_extents.array() > 0.0).all())
              throw ConfigError(what + ": box half_extents must be positive");
          },
          [&](const Sphere& b) {
            if (!(b.radius > 0.0)) throw ConfigError(what + ": sphere radius must be positive");
          },
          [&](const Capsule& b) {
            if (!(b.radius > 0.0)) throw ConfigError(what + ": capsule radius must be positive");
            if ((b.a - b.b).norm() <= 0.0) throw ConfigError(what + ": capsule endpoints coincide");
          },
          [&](const Cylinder& b) {
            if (!(b.radius > 0.0)) throw ConfigError(what + ": cylinder radius must be positive");
            if ((b.a - b.b).norm() <= 0.0) throw ConfigError(what + ": cylinder endpoints coincide");
          },
      },
      s);
}

bool contains(const RegionOfInterest& roi, const Vec3& p) {
  return std::visit(
      Overloaded{
          [&](const RobotSphere& r) {
            return p.z() >= r.floor_z && (p - r.center).squaredNorm() <= r.radius * r.radius;
          },
          [&](const HumanBox& h) { return h.box.contains(p); },
      },
      roi);
}

Aabb bounds(const RegionOfInterest& roi) {
  return std::visit(
      Overloaded{
          [](const RobotSphere& r) {
            Aabb b{r.center.array() - r.radius, r.center.array() + r.radius};
            b.min.z() = std::max(b.min.z(), r.floor_z);
            return b;
          },
          [](const HumanBox& h) { return h.box; },
      },
      roi);
}

}  // namespace perispace
