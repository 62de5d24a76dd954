/// @file coupling.hpp
/// Fluid-body interface operators on top of the smoothed-delta kernel.
///
/// A Coupling holds one row pair (x, y) per interface site together with
///
///   E  (2R x n_f): kernel interpolation of face velocities to the sites
///   J  (2R x n_q): rigid velocity of the sites from body velocities
///
/// so the no-slip constraint reads E v^f - J v^r = 0 and the fluid force
/// on the bodies is J^T lambda / h.
///
/// Two flavors share this shape. node_collocation places one site per mesh
/// node (the classical convolution form; coincident nodes duplicate rows
/// and make the coupled system singular). segment_integral places one site
/// per mesh segment and averages the kernel along it by Gauss-Legendre
/// quadrature with length-normalized weights; the matching rigid velocity
/// is taken at the segment midpoint, which equals the exact length average
/// of the affine velocity field. Rows of either flavor reproduce constant
/// fields exactly.
///
/// Operators depend on the body poses, so the builder also exposes the
/// analytic pose derivatives of all four products E v^f, E^T lam, J v^r,
/// J^T lam needed by the implicit solver.
#pragma once

#include "bodies.hpp"
#include "grid.hpp"

namespace vfsim {

enum class CouplingMode { node_collocation, segment_integral };

/// One kernel evaluation site: quadrature point or collocation node.
/// `arm` is world position minus body center; its perp is d(world)/dtheta.
struct CouplingSite {
  int row = 0;  // row pair index
  int body = 0;
  double weight = 1.0;
  Vec2 world = Vec2::Zero();
  Vec2 arm = Vec2::Zero();
};

struct Coupling {
  CouplingMode mode = CouplingMode::segment_integral;
  int n_rows = 0;  // row pairs
  int n_f = 0;
  int n_q = 0;
  SpMat E;                          // (2 n_rows) x n_f
  SpMat J;                          // (2 n_rows) x n_q
  std::vector<CouplingSite> quad;   // kernel sites backing E
  std::vector<CouplingSite> anchor; // one site per row pair backing J
};

/// Builds both operators at pose q. Throws GeometryError when a mesh node
/// comes closer than the kernel support (1.5 spacings) to a non-periodic
/// domain side, or when a segment has zero world length in segment mode.
Coupling build_coupling(const FluidGrid& grid, const BodySystem& sys, const Vec& q,
                        CouplingMode mode, int quad_order = 3);

/// d(E v^f)/dq, shape (2 n_rows) x n_q.
SpMat interp_pose_jacobian(const FluidGrid& grid, const Coupling& cpl, const Vec& vf);

/// d(E^T lam)/dq, shape n_f x n_q.
SpMat interp_dual_pose_jacobian(const FluidGrid& grid, const Coupling& cpl, const Vec& lam);

/// d(J v^r)/dq, shape (2 n_rows) x n_q.
SpMat body_map_pose_jacobian(const Coupling& cpl, const Vec& vr);

/// d(J^T lam)/dq, shape n_q x n_q.
SpMat body_map_dual_pose_jacobian(const Coupling& cpl, const Vec& lam);

/// Generalized force (fx, fy, torque per body) exerted by the fluid when
/// lam is the converged no-slip impulse of a step of size h: J^T lam / h.
Vec body_force_from_duals(const Coupling& cpl, const Vec& lam, double h);

}  // namespace vfsim
