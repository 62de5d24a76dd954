/// @file bodies.hpp
/// Planar rigid bodies, their boundary meshes and pose constraints.
///
/// Each body carries a pose q_b = (x, y, theta) and velocity v_b =
/// (vx, vy, omega); the system stacks them into vectors of length 3*n.
/// Boundary meshes are polylines given in the body frame; a node at local
/// coordinate r sits at X = c + R(theta) r in the world and moves with
/// V = v_c + omega * perp(X - c), perp(a, b) = (-b, a).
///
/// Constraints are position level. Their stacked residual c5(q, t), the
/// Jacobian C5 = dc5/dq and the pose derivative of the constraint force
/// d(C5^T lambda)/dq are what the implicit integrator consumes.
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "types.hpp"

namespace vfsim {

inline Vec2 perp(const Vec2& a) { return Vec2(-a[1], a[0]); }

inline Eigen::Matrix2d rot(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

struct RigidBody2D {
  double mass = 1.0;
  double inertia = 1.0;        // about the center of mass
  double buoyancy_mass = 0.0;  // displaced fluid mass, offsets gravity
};

/// Polyline boundary in the body frame. Segments index into `nodes`; a
/// closed contour repeats no nodes (segments wrap instead).
struct BoundaryMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 2>> segments;
};

/// Scalar schedule of time, e.g. an actuated joint angle.
using Schedule = std::function<double(double)>;

/// One pose constraint. `body_b == world_frame` attaches to the ground:
/// for revolute joints `anchor_b` is then a world point, for prescribed
/// angles the difference degenerates to the absolute angle of body_a.
struct ConstraintSpec {
  enum class Kind { fixed_body, revolute, prescribed_angle };
  static constexpr int world_frame = -1;

  Kind kind = Kind::fixed_body;
  int body_a = 0;
  int body_b = world_frame;
  Vec2 anchor_a = Vec2::Zero();  // local in body_a
  Vec2 anchor_b = Vec2::Zero();  // local in body_b, or world if grounded
  Vec2 fixed_position = Vec2::Zero();
  double fixed_angle = 0.0;
  Schedule angle;  // prescribed_angle only

  static ConstraintSpec fixed(int body, const Vec2& position, double theta) {
    ConstraintSpec s;
    s.kind = Kind::fixed_body;
    s.body_a = body;
    s.fixed_position = position;
    s.fixed_angle = theta;
    return s;
  }
  static ConstraintSpec revolute(int body_a, int body_b, const Vec2& anchor_a,
                                 const Vec2& anchor_b) {
    ConstraintSpec s;
    s.kind = Kind::revolute;
    s.body_a = body_a;
    s.body_b = body_b;
    s.anchor_a = anchor_a;
    s.anchor_b = anchor_b;
    return s;
  }
  static ConstraintSpec prescribed_angle(int body_a, int body_b, Schedule angle) {
    ConstraintSpec s;
    s.kind = Kind::prescribed_angle;
    s.body_a = body_a;
    s.body_b = body_b;
    s.angle = std::move(angle);
    return s;
  }

  int rows() const { return kind == Kind::fixed_body ? 3 : kind == Kind::revolute ? 2 : 1; }
};

struct BodySystem {
  std::vector<RigidBody2D> bodies;
  std::vector<BoundaryMesh> meshes;  // one per body, possibly empty
  std::vector<ConstraintSpec> constraints;

  int n_bodies() const { return static_cast<int>(bodies.size()); }
  int n_q() const { return 3 * n_bodies(); }
  int n_constraints() const;
  int n_nodes() const;     // mesh nodes over all bodies
  int n_segments() const;  // mesh segments over all bodies

  /// First node index of each body in the stacked world-node array.
  std::vector<int> node_offsets() const;
};

/// Checks index ranges, inertial properties and mesh topology; throws
/// ConfigValidationError or GeometryError.
void validate_system(const BodySystem& sys);

/// Diagonal of M^r: (m, m, I) per body.
Vec body_mass_diagonal(const BodySystem& sys);

/// Generalized gravity force, (m - m_buoy) * g per body and zero torque.
Vec body_external_force(const BodySystem& sys, const Vec2& gravity);

/// World positions of all mesh nodes, stacked body by body.
std::vector<Vec2> world_nodes(const BodySystem& sys, const Vec& q);

/// World velocities of all mesh nodes, stacked (x0, y0, x1, y1, ...).
Vec node_velocities(const BodySystem& sys, const Vec& q, const Vec& vr);

/// J with node_velocities = J * vr, shape (2 * n_nodes) x n_q.
SpMat node_velocity_jacobian(const BodySystem& sys, const Vec& q);

/// Stacked constraint residual c5(q, t).
Vec constraint_eval(const BodySystem& sys, const Vec& q, double t);

/// C5 = dc5/dq. Time only shifts prescribed angles, so it drops out here.
SpMat constraint_jacobian(const BodySystem& sys, const Vec& q);

/// d(C5^T lambda)/dq, the pose curvature of the constraint force.
SpMat constraint_force_pose_jacobian(const BodySystem& sys, const Vec& q, const Vec& lambda);

}  // namespace vfsim
