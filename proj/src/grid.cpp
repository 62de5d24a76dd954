// File: grid.cpp -- MAC grid construction and the discrete fluid operators.
#include "grid.hpp"

#include <cmath>

namespace vfsim {

namespace {

void validate(const GridConfig& c) {
  if (c.nx < 2 || c.ny < 2)
    throw ConfigValidationError("grid: nx and ny must be at least 2");
  if (!(c.dx > 0.0) || !(c.dy > 0.0))
    throw ConfigValidationError("grid: dx and dy must be positive");
  const bool pl = c.bc[side_left].kind == BcKind::periodic;
  const bool pr = c.bc[side_right].kind == BcKind::periodic;
  const bool pb = c.bc[side_bottom].kind == BcKind::periodic;
  const bool pt = c.bc[side_top].kind == BcKind::periodic;
  if (pl != pr)
    throw ConfigValidationError("grid: periodic sides must pair left with right");
  if (pb != pt)
    throw ConfigValidationError("grid: periodic sides must pair bottom with top");
}

void check_size(const Vec& x, int n, const char* what) {
  if (x.size() != n)
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) +
                         ", got " + std::to_string(x.size()));
}

// Divergence stencil, one row per cell.
SpMat assemble_divergence(const FluidGrid& g) {
  const int nx = g.config.nx, ny = g.config.ny;
  const double dx = g.config.dx, dy = g.config.dy;
  std::vector<Trip> t;
  t.reserve(static_cast<size_t>(g.n_p) * 4);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int c = g.cell_index(i, j);
      t.emplace_back(c, g.u_index(i + 1, j), dy);
      t.emplace_back(c, g.u_index(i, j), -dy);
      t.emplace_back(c, g.v_index(i, j + 1), dx);
      t.emplace_back(c, g.v_index(i, j), -dx);
    }
  SpMat D(g.n_p, g.n_f);
  D.setFromTriplets(t.begin(), t.end());
  D.makeCompressed();
  return D;
}

// Gradient stencil, one row per face, assembled independently of D so that
// the adjointness G = D^T is a checkable property rather than a definition.
// Boundary faces simply omit the missing cell.
SpMat assemble_gradient(const FluidGrid& g) {
  const int nx = g.config.nx, ny = g.config.ny;
  const double dx = g.config.dx, dy = g.config.dy;
  std::vector<Trip> t;
  t.reserve(static_cast<size_t>(g.n_f) * 2);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < g.u_cols(); ++i) {
      const int f = g.u_index(i, j);
      if (g.periodic_x || i > 0) t.emplace_back(f, g.cell_index(i - 1, j), dy);
      if (g.periodic_x || i < nx) t.emplace_back(f, g.cell_index(i, j), -dy);
    }
  for (int j = 0; j < g.v_rows(); ++j)
    for (int i = 0; i < nx; ++i) {
      const int f = g.v_index(i, j);
      if (g.periodic_y || j > 0) t.emplace_back(f, g.cell_index(i, j - 1), dx);
      if (g.periodic_y || j < ny) t.emplace_back(f, g.cell_index(i, j), -dx);
    }
  SpMat G(g.n_f, g.n_p);
  G.setFromTriplets(t.begin(), t.end());
  G.makeCompressed();
  return G;
}

// Viscous 5-point stencil. Rows of velocity DOFs pinned by B stay empty
// (their momentum rows only determine the boundary multiplier). Missing
// tangential neighbors are eliminated with a linear-reflection ghost
//   u_ghost = 2*u_bc - u_center,
// which contributes -2 to the diagonal and an affine term 2*u_bc recorded in
// ghost_terms. Missing neighbors at outflow sides drop the flux entirely
// (zero normal gradient).
void assemble_laplacian(FluidGrid& g) {
  const int nx = g.config.nx, ny = g.config.ny;
  const double ax = g.config.dy / g.config.dx;  // x-direction flux coefficient
  const double ay = g.config.dx / g.config.dy;
  std::vector<Trip> t;
  g.ghost_terms.clear();

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < g.u_cols(); ++i) {
      const int f = g.u_index(i, j);
      if (g.u_face_pinned(i, j)) continue;
      double diag = 0.0;
      // x-neighbors (normal direction for u; only outflow can leave a u-DOF
      // free on the boundary, handled by dropping the outside flux)
      if (g.periodic_x || i > 0) {
        t.emplace_back(f, g.u_index(i - 1, j), ax);
        diag -= ax;
      }
      if (g.periodic_x || i < nx) {
        t.emplace_back(f, g.u_index(i + 1, j), ax);
        diag -= ax;
      }
      // y-neighbors (tangential direction for u)
      for (int s = -1; s <= 1; s += 2) {
        const int jn = j + s;
        if (g.periodic_y || (jn >= 0 && jn < ny)) {
          t.emplace_back(f, g.u_index(i, jn), ay);
          diag -= ay;
        } else {
          const int side = s < 0 ? side_bottom : side_top;
          if (g.side_constrains(side)) {
            diag -= 2.0 * ay;
            g.ghost_terms.push_back({f, side, 0, 2.0 * ay});
          }
          // outflow: flux dropped
        }
      }
      t.emplace_back(f, f, diag);
    }

  for (int j = 0; j < g.v_rows(); ++j)
    for (int i = 0; i < nx; ++i) {
      const int f = g.v_index(i, j);
      if (g.v_face_pinned(i, j)) continue;
      double diag = 0.0;
      if (g.periodic_y || j > 0) {
        t.emplace_back(f, g.v_index(i, j - 1), ay);
        diag -= ay;
      }
      if (g.periodic_y || j < ny) {
        t.emplace_back(f, g.v_index(i, j + 1), ay);
        diag -= ay;
      }
      for (int s = -1; s <= 1; s += 2) {
        const int in = i + s;
        if (g.periodic_x || (in >= 0 && in < nx)) {
          t.emplace_back(f, g.v_index(in, j), ax);
          diag -= ax;
        } else {
          const int side = s < 0 ? side_left : side_right;
          if (g.side_constrains(side)) {
            diag -= 2.0 * ax;
            g.ghost_terms.push_back({f, side, 1, 2.0 * ax});
          }
        }
      }
      t.emplace_back(f, f, diag);
    }

  g.L.resize(g.n_f, g.n_f);
  g.L.setFromTriplets(t.begin(), t.end());
  g.L.makeCompressed();
}

void assemble_boundary(FluidGrid& g) {
  const int nx = g.config.nx, ny = g.config.ny;
  std::vector<Trip> t;
  g.b_rows.clear();
  int r = 0;
  auto add = [&](int dof, int side, int comp, int i, int j) {
    t.emplace_back(r, dof, 1.0);
    g.b_rows.push_back({r, side, comp, i, j});
    ++r;
  };
  if (!g.periodic_x && g.side_constrains(side_left))
    for (int j = 0; j < ny; ++j) add(g.u_index(0, j), side_left, 0, 0, j);
  if (!g.periodic_x && g.side_constrains(side_right))
    for (int j = 0; j < ny; ++j) add(g.u_index(nx, j), side_right, 0, nx, j);
  if (!g.periodic_y && g.side_constrains(side_bottom))
    for (int i = 0; i < nx; ++i) add(g.v_index(i, 0), side_bottom, 1, i, 0);
  if (!g.periodic_y && g.side_constrains(side_top))
    for (int i = 0; i < nx; ++i) add(g.v_index(i, ny), side_top, 1, i, ny);
  g.B.resize(r, g.n_f);
  g.B.setFromTriplets(t.begin(), t.end());
  g.B.makeCompressed();
}

}  // namespace

SideVelocities FluidGrid::base_side_velocities() const {
  SideVelocities sv{};
  for (int s = 0; s < 4; ++s)
    sv[s] = config.bc[s].kind == BcKind::inflow ? config.bc[s].velocity : Vec2::Zero();
  return sv;
}

FluidGrid build_grid(const GridConfig& config, const FluidProperties& props) {
  validate(config);
  if (!(props.rho > 0.0) || props.mu < 0.0)
    throw ConfigValidationError("fluid: rho must be positive and mu non-negative");

  FluidGrid g;
  g.config = config;
  g.props = props;
  g.periodic_x = config.bc[side_left].kind == BcKind::periodic;
  g.periodic_y = config.bc[side_bottom].kind == BcKind::periodic;
  for (const auto& s : config.bc) g.has_outflow |= s.kind == BcKind::outflow;

  g.n_u = g.u_cols() * config.ny;
  g.n_v = config.nx * g.v_rows();
  g.n_f = g.n_u + g.n_v;
  g.n_p = config.nx * config.ny;

  g.u_x.resize(g.n_u);
  g.u_y.resize(g.n_u);
  for (int j = 0; j < config.ny; ++j)
    for (int i = 0; i < g.u_cols(); ++i) {
      const int f = g.u_index(i, j);
      g.u_x[f] = config.origin[0] + i * config.dx;
      g.u_y[f] = config.origin[1] + (j + 0.5) * config.dy;
    }
  g.v_x.resize(g.n_v);
  g.v_y.resize(g.n_v);
  for (int j = 0; j < g.v_rows(); ++j)
    for (int i = 0; i < config.nx; ++i) {
      const int f = g.v_index(i, j) - g.n_u;
      g.v_x[f] = config.origin[0] + (i + 0.5) * config.dx;
      g.v_y[f] = config.origin[1] + j * config.dy;
    }
  g.cell_x.resize(g.n_p);
  g.cell_y.resize(g.n_p);
  for (int j = 0; j < config.ny; ++j)
    for (int i = 0; i < config.nx; ++i) {
      const int c = g.cell_index(i, j);
      g.cell_x[c] = config.origin[0] + (i + 0.5) * config.dx;
      g.cell_y[c] = config.origin[1] + (j + 0.5) * config.dy;
    }

  g.mf = Vec::Constant(g.n_f, props.rho * config.dx * config.dy);
  g.D = assemble_divergence(g);
  g.G = assemble_gradient(g);
  assemble_laplacian(g);
  assemble_boundary(g);
  return g;
}

Vec divergence(const FluidGrid& grid, const Vec& v) {
  check_size(v, grid.n_f, "divergence");
  return grid.D * v;
}

Vec gradient(const FluidGrid& grid, const Vec& p) {
  check_size(p, grid.n_p, "gradient");
  return grid.G * p;
}

Vec laplacian_apply(const FluidGrid& grid, const Vec& v) {
  check_size(v, grid.n_f, "laplacian_apply");
  return grid.L * v;
}

Vec laplacian_bc(const FluidGrid& grid, const SideVelocities& side_vel) {
  Vec l = Vec::Zero(grid.n_f);
  for (const auto& gt : grid.ghost_terms) l[gt.row] += gt.coeff * side_vel[gt.side][gt.comp];
  return l;
}

Vec boundary_values(const FluidGrid& grid, const SideVelocities& side_vel) {
  Vec vb(grid.b_rows.size());
  for (const auto& br : grid.b_rows) vb[br.row] = side_vel[br.side][br.comp];
  return vb;
}

std::pair<const SpMat*, Vec> boundary_rows(const FluidGrid& grid) {
  return {&grid.B, boundary_values(grid, grid.base_side_velocities())};
}

Vec vorticity(const FluidGrid& grid, const Vec& v) {
  check_size(v, grid.n_f, "vorticity");
  const int nx = grid.config.nx, ny = grid.config.ny;
  const double dx = grid.config.dx, dy = grid.config.dy;
  const SideVelocities sv = grid.base_side_velocities();
  Vec w((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      double dvdx;
      if (grid.periodic_x || (i > 0 && i < nx)) {
        dvdx = (v[grid.v_index(i, j)] - v[grid.v_index(i - 1, j)]) / dx;
      } else if (i == 0) {
        dvdx = grid.side_constrains(side_left)
                   ? (v[grid.v_index(0, j)] - sv[side_left][1]) / (0.5 * dx)
                   : 0.0;
      } else {
        dvdx = grid.side_constrains(side_right)
                   ? (sv[side_right][1] - v[grid.v_index(nx - 1, j)]) / (0.5 * dx)
                   : 0.0;
      }
      double dudy;
      if (grid.periodic_y || (j > 0 && j < ny)) {
        dudy = (v[grid.u_index(i, j)] - v[grid.u_index(i, j - 1)]) / dy;
      } else if (j == 0) {
        dudy = grid.side_constrains(side_bottom)
                   ? (v[grid.u_index(i, 0)] - sv[side_bottom][0]) / (0.5 * dy)
                   : 0.0;
      } else {
        dudy = grid.side_constrains(side_top)
                   ? (sv[side_top][0] - v[grid.u_index(i, ny - 1)]) / (0.5 * dy)
                   : 0.0;
      }
      w[j * (nx + 1) + i] = dvdx - dudy;
    }
  return w;
}

}  // namespace vfsim
