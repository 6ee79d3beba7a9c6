#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <string>
#include <variant>

namespace perispace {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Quat = Eigen::Quaterniond;

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  Vec3 extent() const { return max - min; }
  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
  bool contains(const Aabb& other, double tol = 1e-9) const {
    return (other.min.array() >= min.array() - tol).all() &&
           (other.max.array() <= max.array() + tol).all();
  }
  Aabb expanded(double margin) const {
    return {min.array() - margin, max.array() + margin};
  }
};

// Rigid placement; orientation rotates body-frame vectors into the world.
struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
};

struct Box {
  Vec3 center;
  Vec3 half_extents;
};

struct Sphere {
  Vec3 center;
  double radius = 0.0;
};

// Segment with hemispherical caps.
struct Capsule {
  Vec3 a;
  Vec3 b;
  double radius = 0.0;
};

// Finite cylinder with flat caps at the endpoints.
struct Cylinder {
  Vec3 a;
  Vec3 b;
  double radius = 0.0;
};

using Primitive = std::variant<Box, Sphere, Capsule, Cylinder>;

// Distance from p to the closed segment [a, b].
double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

bool contains(const Box& s, const Vec3& p);
bool contains(const Sphere& s, const Vec3& p);
bool contains(const Capsule& s, const Vec3& p);
bool contains(const Cylinder& s, const Vec3& p);
bool contains(const Primitive& s, const Vec3& p);

Aabb bounds(const Primitive& s);

// Largest distance from `origin` to any point of the primitive (exact).
double max_distance_from(const Primitive& s, const Vec3& origin);

// Throws ConfigError naming `what` if radii/extents/endpoints are degenerate.
void validate(const Primitive& s, const std::string& what);

// Upper semi-sphere above floor_z, centred on the robot base.
struct RobotSphere {
  Vec3 center;
  double radius = 0.0;
  double floor_z = 0.0;
};

struct HumanBox {
  Aabb box;
};

using RegionOfInterest = std::variant<RobotSphere, HumanBox>;

bool contains(const RegionOfInterest& roi, const Vec3& p);
Aabb bounds(const RegionOfInterest& roi);

}  // namespace perispace
