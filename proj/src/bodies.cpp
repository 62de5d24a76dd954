// File: bodies.cpp -- rigid body kinematics and pose constraints.
#include "bodies.hpp"

#include <cmath>

namespace vfsim {

namespace {

void check_q(const BodySystem& sys, const Vec& q, const char* what) {
  if (q.size() != sys.n_q())
    throw DimensionError(std::string(what) + ": expected pose length " +
                         std::to_string(sys.n_q()) + ", got " + std::to_string(q.size()));
}

Vec2 body_center(const Vec& q, int b) { return Vec2(q[3 * b], q[3 * b + 1]); }

}  // namespace

int BodySystem::n_constraints() const {
  int n = 0;
  for (const auto& c : constraints) n += c.rows();
  return n;
}

int BodySystem::n_nodes() const {
  int n = 0;
  for (const auto& m : meshes) n += static_cast<int>(m.nodes.size());
  return n;
}

int BodySystem::n_segments() const {
  int n = 0;
  for (const auto& m : meshes) n += static_cast<int>(m.segments.size());
  return n;
}

std::vector<int> BodySystem::node_offsets() const {
  std::vector<int> off(meshes.size() + 1, 0);
  for (size_t b = 0; b < meshes.size(); ++b)
    off[b + 1] = off[b] + static_cast<int>(meshes[b].nodes.size());
  return off;
}

void validate_system(const BodySystem& sys) {
  if (sys.meshes.size() != sys.bodies.size())
    throw ConfigValidationError("bodies: expected one boundary mesh per body");
  for (size_t b = 0; b < sys.bodies.size(); ++b) {
    if (!(sys.bodies[b].mass > 0.0) || !(sys.bodies[b].inertia > 0.0))
      throw ConfigValidationError("bodies: mass and inertia must be positive (body " +
                                  std::to_string(b) + ")");
    if (sys.bodies[b].buoyancy_mass < 0.0)
      throw ConfigValidationError("bodies: buoyancy mass must be non-negative (body " +
                                  std::to_string(b) + ")");
    const int nn = static_cast<int>(sys.meshes[b].nodes.size());
    for (const auto& seg : sys.meshes[b].segments) {
      if (seg[0] < 0 || seg[0] >= nn || seg[1] < 0 || seg[1] >= nn)
        throw GeometryError("bodies: segment node index out of range (body " +
                            std::to_string(b) + ")");
      if (seg[0] == seg[1])
        throw GeometryError("bodies: degenerate segment (body " + std::to_string(b) + ")");
    }
  }
  for (size_t k = 0; k < sys.constraints.size(); ++k) {
    const auto& c = sys.constraints[k];
    auto in_range = [&](int b) { return b >= 0 && b < sys.n_bodies(); };
    if (!in_range(c.body_a))
      throw ConfigValidationError("bodies: constraint " + std::to_string(k) +
                                  " references invalid body " + std::to_string(c.body_a));
    if (c.kind != ConstraintSpec::Kind::fixed_body && c.body_b != ConstraintSpec::world_frame &&
        !in_range(c.body_b))
      throw ConfigValidationError("bodies: constraint " + std::to_string(k) +
                                  " references invalid body " + std::to_string(c.body_b));
    if (c.kind == ConstraintSpec::Kind::prescribed_angle && !c.angle)
      throw ScheduleError("bodies: prescribed angle constraint " + std::to_string(k) +
                          " has no schedule");
  }
}

Vec body_mass_diagonal(const BodySystem& sys) {
  Vec m(sys.n_q());
  for (int b = 0; b < sys.n_bodies(); ++b) {
    m[3 * b] = sys.bodies[b].mass;
    m[3 * b + 1] = sys.bodies[b].mass;
    m[3 * b + 2] = sys.bodies[b].inertia;
  }
  return m;
}

Vec body_external_force(const BodySystem& sys, const Vec2& gravity) {
  Vec f = Vec::Zero(sys.n_q());
  for (int b = 0; b < sys.n_bodies(); ++b) {
    const Vec2 fb = (sys.bodies[b].mass - sys.bodies[b].buoyancy_mass) * gravity;
    f[3 * b] = fb[0];
    f[3 * b + 1] = fb[1];
  }
  return f;
}

std::vector<Vec2> world_nodes(const BodySystem& sys, const Vec& q) {
  check_q(sys, q, "world_nodes");
  std::vector<Vec2> x;
  x.reserve(sys.n_nodes());
  for (int b = 0; b < sys.n_bodies(); ++b) {
    const Vec2 c = body_center(q, b);
    const Eigen::Matrix2d r = rot(q[3 * b + 2]);
    for (const auto& local : sys.meshes[b].nodes) x.push_back(c + r * local);
  }
  return x;
}

Vec node_velocities(const BodySystem& sys, const Vec& q, const Vec& vr) {
  check_q(sys, q, "node_velocities");
  check_q(sys, vr, "node_velocities");
  Vec vel(2 * sys.n_nodes());
  int k = 0;
  for (int b = 0; b < sys.n_bodies(); ++b) {
    const Vec2 vc(vr[3 * b], vr[3 * b + 1]);
    const double omega = vr[3 * b + 2];
    const Eigen::Matrix2d r = rot(q[3 * b + 2]);
    for (const auto& local : sys.meshes[b].nodes) {
      const Vec2 v = vc + omega * perp(r * local);
      vel[2 * k] = v[0];
      vel[2 * k + 1] = v[1];
      ++k;
    }
  }
  return vel;
}

SpMat node_velocity_jacobian(const BodySystem& sys, const Vec& q) {
  check_q(sys, q, "node_velocity_jacobian");
  std::vector<Trip> t;
  t.reserve(static_cast<size_t>(sys.n_nodes()) * 6);
  int k = 0;
  for (int b = 0; b < sys.n_bodies(); ++b) {
    const Eigen::Matrix2d r = rot(q[3 * b + 2]);
    for (const auto& local : sys.meshes[b].nodes) {
      const Vec2 arm = perp(r * local);
      t.emplace_back(2 * k, 3 * b, 1.0);
      t.emplace_back(2 * k, 3 * b + 2, arm[0]);
      t.emplace_back(2 * k + 1, 3 * b + 1, 1.0);
      t.emplace_back(2 * k + 1, 3 * b + 2, arm[1]);
      ++k;
    }
  }
  SpMat j(2 * sys.n_nodes(), sys.n_q());
  j.setFromTriplets(t.begin(), t.end());
  j.makeCompressed();
  return j;
}

Vec constraint_eval(const BodySystem& sys, const Vec& q, double t) {
  check_q(sys, q, "constraint_eval");
  Vec c(sys.n_constraints());
  int r = 0;
  for (const auto& spec : sys.constraints) {
    const int a = spec.body_a, b = spec.body_b;
    switch (spec.kind) {
      case ConstraintSpec::Kind::fixed_body:
        c[r] = q[3 * a] - spec.fixed_position[0];
        c[r + 1] = q[3 * a + 1] - spec.fixed_position[1];
        c[r + 2] = q[3 * a + 2] - spec.fixed_angle;
        break;
      case ConstraintSpec::Kind::revolute: {
        const Vec2 pa = body_center(q, a) + rot(q[3 * a + 2]) * spec.anchor_a;
        const Vec2 pb = b == ConstraintSpec::world_frame
                            ? spec.anchor_b
                            : Vec2(body_center(q, b) + rot(q[3 * b + 2]) * spec.anchor_b);
        c[r] = pa[0] - pb[0];
        c[r + 1] = pa[1] - pb[1];
        break;
      }
      case ConstraintSpec::Kind::prescribed_angle: {
        const double rel =
            b == ConstraintSpec::world_frame ? q[3 * a + 2] : q[3 * a + 2] - q[3 * b + 2];
        c[r] = rel - spec.angle(t);
        break;
      }
    }
    r += spec.rows();
  }
  return c;
}

SpMat constraint_jacobian(const BodySystem& sys, const Vec& q) {
  check_q(sys, q, "constraint_jacobian");
  std::vector<Trip> t;
  int r = 0;
  for (const auto& spec : sys.constraints) {
    const int a = spec.body_a, b = spec.body_b;
    switch (spec.kind) {
      case ConstraintSpec::Kind::fixed_body:
        for (int k = 0; k < 3; ++k) t.emplace_back(r + k, 3 * a + k, 1.0);
        break;
      case ConstraintSpec::Kind::revolute: {
        const Vec2 arm_a = perp(rot(q[3 * a + 2]) * spec.anchor_a);
        t.emplace_back(r, 3 * a, 1.0);
        t.emplace_back(r, 3 * a + 2, arm_a[0]);
        t.emplace_back(r + 1, 3 * a + 1, 1.0);
        t.emplace_back(r + 1, 3 * a + 2, arm_a[1]);
        if (b != ConstraintSpec::world_frame) {
          const Vec2 arm_b = perp(rot(q[3 * b + 2]) * spec.anchor_b);
          t.emplace_back(r, 3 * b, -1.0);
          t.emplace_back(r, 3 * b + 2, -arm_b[0]);
          t.emplace_back(r + 1, 3 * b + 1, -1.0);
          t.emplace_back(r + 1, 3 * b + 2, -arm_b[1]);
        }
        break;
      }
      case ConstraintSpec::Kind::prescribed_angle:
        t.emplace_back(r, 3 * a + 2, 1.0);
        if (b != ConstraintSpec::world_frame) t.emplace_back(r, 3 * b + 2, -1.0);
        break;
    }
    r += spec.rows();
  }
  SpMat c5(sys.n_constraints(), sys.n_q());
  c5.setFromTriplets(t.begin(), t.end());
  c5.makeCompressed();
  return c5;
}

SpMat constraint_force_pose_jacobian(const BodySystem& sys, const Vec& q, const Vec& lambda) {
  check_q(sys, q, "constraint_force_pose_jacobian");
  if (lambda.size() != sys.n_constraints())
    throw DimensionError("constraint_force_pose_jacobian: expected multiplier length " +
                         std::to_string(sys.n_constraints()) + ", got " +
                         std::to_string(lambda.size()));
  std::vector<Trip> t;
  int r = 0;
  for (const auto& spec : sys.constraints) {
    if (spec.kind == ConstraintSpec::Kind::revolute) {
      const Vec2 lam(lambda[r], lambda[r + 1]);
      const int a = spec.body_a, b = spec.body_b;
      const Vec2 ra = rot(q[3 * a + 2]) * spec.anchor_a;
      t.emplace_back(3 * a + 2, 3 * a + 2, -ra.dot(lam));
      if (b != ConstraintSpec::world_frame) {
        const Vec2 rb = rot(q[3 * b + 2]) * spec.anchor_b;
        t.emplace_back(3 * b + 2, 3 * b + 2, rb.dot(lam));
      }
    }
    r += spec.rows();
  }
  SpMat j(sys.n_q(), sys.n_q());
  j.setFromTriplets(t.begin(), t.end());
  j.makeCompressed();
  return j;
}

}  // namespace vfsim
