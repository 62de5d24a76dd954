/// @file grid.hpp
/// Staggered (MAC) finite-volume grid for the 2D incompressible fluid.
///
/// Velocity components live on cell faces (u on vertical faces, v on
/// horizontal faces), pressure at cell centers. All assembled operators are
/// volume integrated, i.e. scaled by dx*dy, so the momentum residual can be
/// stacked term by term in consistent units:
///
///   Mf   diagonal mass, rho*dx*dy per velocity DOF
///   G    pressure gradient  (n_f x n_p);  (G p)_face = dy*(p_left - p_right)
///   D    divergence         (n_p x n_f);  (D v)_cell = (u_e - u_w)*dy + (v_n - v_s)*dx
///        assembled from its own stencil and guaranteed to equal G^T
///   L    viscous 5-point stencil with boundary rows eliminated per bc kind
///   B    selection rows for boundary-normal velocity DOFs on wall/inflow sides
///
/// Periodic sides identify the overlapping face row/column, so a fully
/// periodic nx*ny grid carries exactly nx*ny u-DOFs (not (nx+1)*ny).
#pragma once

#include <array>
#include <vector>

#include "types.hpp"

namespace vfsim {

enum class BcKind { wall, periodic, inflow, outflow };

/// One side of the rectangular domain. `velocity` is the prescribed fluid
/// velocity on that side; it is meaningful for inflow (both components) and
/// fixed at zero for walls.
struct BcSide {
  BcKind kind = BcKind::wall;
  Vec2 velocity = Vec2::Zero();
};

/// Side indices used throughout: 0 = left (x min), 1 = right (x max),
/// 2 = bottom (y min), 3 = top (y max).
enum Side : int { side_left = 0, side_right = 1, side_bottom = 2, side_top = 3 };

struct GridConfig {
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;
  Vec2 origin = Vec2::Zero();
  std::array<BcSide, 4> bc{};
};

struct FluidProperties {
  double rho = 1.0;
  double mu = 0.0;
  Vec2 g = Vec2::Zero();
};

/// Face velocities and cell pressures at one midpoint time. `p` carries
/// pressure*time units (the incompressibility dual is an impulse over the
/// step); divide by the step size h for instantaneous pressure.
struct FluidState {
  Vec v;
  Vec p;
};

/// Metadata for one row of B: which side and velocity component it pins,
/// and the face indices, so time-dependent boundary values can be rebuilt.
struct BoundaryRowInfo {
  int row = 0;
  int side = 0;
  int comp = 0;  // 0 = u, 1 = v (the normal component of that side)
  int i = 0, j = 0;
};

/// One affine contribution to the viscous stencil from ghost elimination:
/// l_bc[row] += coeff * side_velocity[side][comp].
struct GhostTermInfo {
  int row = 0;
  int side = 0;
  int comp = 0;
  double coeff = 0.0;
};

/// Per-side prescribed velocities, indexed by Side. Defaults come from the
/// grid config; the integrator may override them per step for time-dependent
/// boundary conditions.
using SideVelocities = std::array<Vec2, 4>;

struct FluidGrid {
  GridConfig config;
  FluidProperties props;
  bool periodic_x = false, periodic_y = false, has_outflow = false;
  int n_u = 0, n_v = 0, n_f = 0, n_p = 0;

  Vec mf;   // diagonal of the velocity mass matrix, length n_f
  SpMat G;  // n_f x n_p
  SpMat D;  // n_p x n_f, equals G^T
  SpMat L;  // n_f x n_f
  SpMat B;  // n_bc x n_f
  std::vector<BoundaryRowInfo> b_rows;
  std::vector<GhostTermInfo> ghost_terms;

  // Coordinates of each velocity DOF and cell center, e.g. for kernel windows
  // and field output.
  Vec u_x, u_y, v_x, v_y, cell_x, cell_y;

  int u_cols() const { return periodic_x ? config.nx : config.nx + 1; }
  int v_rows() const { return periodic_y ? config.ny : config.ny + 1; }

  /// Global DOF of u-face (i, j). Out-of-range coordinates wrap on the
  /// periodic axes, so stencil code can index neighbors uniformly.
  int u_index(int i, int j) const {
    const int m = u_cols();
    if (periodic_x) i = (i % m + m) % m;
    if (periodic_y) j = (j % config.ny + config.ny) % config.ny;
    return j * m + i;
  }
  /// Global DOF of v-face (i, j); wraps like u_index.
  int v_index(int i, int j) const {
    const int m = v_rows();
    if (periodic_x) i = (i % config.nx + config.nx) % config.nx;
    if (periodic_y) j = (j % m + m) % m;
    return n_u + j * config.nx + i;
  }
  int cell_index(int i, int j) const {
    if (periodic_x) i = (i % config.nx + config.nx) % config.nx;
    if (periodic_y) j = (j % config.ny + config.ny) % config.ny;
    return j * config.nx + i;
  }

  /// True if the side prescribes velocity values (wall or inflow).
  bool side_constrains(int side) const {
    const BcKind k = config.bc[side].kind;
    return k == BcKind::wall || k == BcKind::inflow;
  }
  /// True if this u-face is a boundary-normal DOF pinned by a B row.
  bool u_face_pinned(int i, int j) const {
    (void)j;
    return !periodic_x && ((i == 0 && side_constrains(side_left)) ||
                           (i == config.nx && side_constrains(side_right)));
  }
  bool v_face_pinned(int i, int j) const {
    (void)i;
    return !periodic_y && ((j == 0 && side_constrains(side_bottom)) ||
                           (j == config.ny && side_constrains(side_top)));
  }

  /// Prescribed side velocities taken from the grid config (inflow values;
  /// zero for walls, periodic and outflow).
  SideVelocities base_side_velocities() const;
};

FluidGrid build_grid(const GridConfig& config, const FluidProperties& props);

/// D v, the volume-integrated divergence per cell (equals G^T v).
Vec divergence(const FluidGrid& grid, const Vec& v);

/// G p on faces; sign convention fixed by divergence = G^T.
Vec gradient(const FluidGrid& grid, const Vec& p);

/// L v (no affine part; see laplacian_bc for the ghost contribution).
Vec laplacian_apply(const FluidGrid& grid, const Vec& v);

/// Affine part of the eliminated viscous stencil for the given side
/// velocities, so the full viscous term is L v + l_bc.
Vec laplacian_bc(const FluidGrid& grid, const SideVelocities& side_vel);

/// Prescribed values paired with the rows of B.
Vec boundary_values(const FluidGrid& grid, const SideVelocities& side_vel);

/// The boundary selection matrix together with its baseline values.
std::pair<const SpMat*, Vec> boundary_rows(const FluidGrid& grid);

/// Vorticity dv/dx - du/dy at the (nx+1)*(ny+1) cell corners, one-sided at
/// non-periodic boundaries using the prescribed tangential values.
Vec vorticity(const FluidGrid& grid, const Vec& v);

}  // namespace vfsim
