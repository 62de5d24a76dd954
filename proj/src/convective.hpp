/// @file convective.hpp
/// Skew-symmetric convective operator N(v) on the MAC grid and its analytic
/// Jacobian. The discretization is the average of the divergence and
/// advective forms with linear face interpolation, assembled here as
///   N = N_div - (1/2) v_center * div_CV,
/// which makes v^T N(v) vanish identically on periodic domains and keeps the
/// operator quadratic in v (plus a linear part when tangential boundary
/// values are nonzero).
#pragma once

#include "grid.hpp"

namespace vfsim {

/// N(v), volume integrated. Rows of pinned boundary DOFs are zero.
Vec convective(const FluidGrid& grid, const Vec& v, const SideVelocities& side_vel);
Vec convective(const FluidGrid& grid, const Vec& v);

/// dN/dv at v; exact for the quadratic form above.
SpMat convective_jacobian(const FluidGrid& grid, const Vec& v, const SideVelocities& side_vel);
SpMat convective_jacobian(const FluidGrid& grid, const Vec& v);

}  // namespace vfsim
