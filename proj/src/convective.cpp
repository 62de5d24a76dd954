// File: convective.cpp
//
// Every row of N(v) is a sum of terms s * (a.v + a0) * (b.v + b0) where a and
// b hold at most two face DOFs (linear interpolation stencils). One walker
// enumerates the terms of all free rows; value and Jacobian evaluation share
// it, so the analytic Jacobian cannot drift from the operator.
//
// Control-volume fluxes for the u-row at face (i,j):
//   east/west   : +-dy * ubar^2           (ubar at adjacent cell centers)
//   north/south : +-dx * vbar * ubar      (at the CV corners / grid nodes)
//   defect      : -(1/2) u_ij * [(ubar_e - ubar_w) dy + (vbar_n - vbar_s) dx]
// and symmetrically for v-rows. Samples that fall on a wall/inflow boundary
// use the prescribed tangential value as a constant; samples beyond an
// outflow side collapse to one-sided (zero-gradient) interpolation.
#include "convective.hpp"

namespace vfsim {

namespace {

// Affine sample: sum_k w[k] * v[idx[k]] + c with n <= 2 stencil entries.
struct Samp {
  int idx[2] = {0, 0};
  double w[2] = {0.0, 0.0};
  double c = 0.0;
  int n = 0;

  static Samp average(int a, int b) { return {{a, b}, {0.5, 0.5}, 0.0, 2}; }
  static Samp single(int a) { return {{a, 0}, {1.0, 0.0}, 0.0, 1}; }
  static Samp constant(double c) { return {{0, 0}, {0.0, 0.0}, c, 0}; }

  double eval(const Vec& v) const {
    double r = c;
    for (int k = 0; k < n; ++k) r += w[k] * v[idx[k]];
    return r;
  }
};

// The walker calls sink(row, s, a, b) for every term.
template <class Sink>
void for_each_term(const FluidGrid& g, const SideVelocities& sv, Sink&& sink) {
  const int nx = g.config.nx, ny = g.config.ny;
  const double dx = g.config.dx, dy = g.config.dy;

  // u at the cell center right of u-face column i (one-sided past an
  // outflow boundary; never requested next to a pinned column).
  auto ubar_x = [&](int i, int j) {
    if (g.periodic_x || (i >= 0 && i < nx)) return Samp::average(g.u_index(i, j), g.u_index(i + 1, j));
    return Samp::single(g.u_index(i < 0 ? 0 : nx, j));
  };
  // v interpolated to the grid node at x-index i (between v columns i-1, i).
  auto vbar_x = [&](int i, int j) {
    if (g.periodic_x || (i >= 1 && i <= nx - 1))
      return Samp::average(g.v_index(i - 1, j), g.v_index(i, j));
    return Samp::single(g.v_index(i <= 0 ? 0 : nx - 1, j));
  };
  // v at the cell center above v-face row j.
  auto vbar_y = [&](int i, int j) {
    if (g.periodic_y || (j >= 0 && j < ny)) return Samp::average(g.v_index(i, j), g.v_index(i, j + 1));
    return Samp::single(g.v_index(i, j < 0 ? 0 : ny));
  };
  // u interpolated to the grid node at y-index j.
  auto ubar_y = [&](int i, int j) {
    if (g.periodic_y || (j >= 1 && j <= ny - 1))
      return Samp::average(g.u_index(i, j - 1), g.u_index(i, j));
    return Samp::single(g.u_index(i, j <= 0 ? 0 : ny - 1));
  };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < g.u_cols(); ++i) {
      if (g.u_face_pinned(i, j)) continue;
      const int row = g.u_index(i, j);
      const Samp uc = Samp::single(row);
      const Samp ue = ubar_x(i, j), uw = ubar_x(i - 1, j);

      Samp vn, un;
      if (g.periodic_y || j < ny - 1) {
        vn = vbar_x(i, j + 1);
        un = Samp::average(g.u_index(i, j), g.u_index(i, j + 1));
      } else {
        vn = vbar_x(i, ny);  // constrained or outflow v DOFs on the boundary
        un = g.side_constrains(side_top) ? Samp::constant(sv[side_top][0]) : Samp::single(row);
      }
      Samp vs, us;
      if (g.periodic_y || j > 0) {
        vs = vbar_x(i, j);
        us = Samp::average(g.u_index(i, j - 1), g.u_index(i, j));
      } else {
        vs = vbar_x(i, 0);
        us = g.side_constrains(side_bottom) ? Samp::constant(sv[side_bottom][0]) : Samp::single(row);
      }

      sink(row, dy, ue, ue);
      sink(row, -dy, uw, uw);
      sink(row, dx, vn, un);
      sink(row, -dx, vs, us);
      sink(row, -0.5 * dy, uc, ue);
      sink(row, 0.5 * dy, uc, uw);
      sink(row, -0.5 * dx, uc, vn);
      sink(row, 0.5 * dx, uc, vs);
    }

  for (int j = 0; j < g.v_rows(); ++j)
    for (int i = 0; i < nx; ++i) {
      if (g.v_face_pinned(i, j)) continue;
      const int row = g.v_index(i, j);
      const Samp vc = Samp::single(row);
      const Samp vn = vbar_y(i, j), vs = vbar_y(i, j - 1);

      Samp ue, ve;
      if (g.periodic_x || i < nx - 1) {
        ue = ubar_y(i + 1, j);
        ve = Samp::average(g.v_index(i, j), g.v_index(i + 1, j));
      } else {
        ue = ubar_y(nx, j);
        ve = g.side_constrains(side_right) ? Samp::constant(sv[side_right][1]) : Samp::single(row);
      }
      Samp uw, vw;
      if (g.periodic_x || i > 0) {
        uw = ubar_y(i, j);
        vw = Samp::average(g.v_index(i - 1, j), g.v_index(i, j));
      } else {
        uw = ubar_y(0, j);
        vw = g.side_constrains(side_left) ? Samp::constant(sv[side_left][1]) : Samp::single(row);
      }

      sink(row, dx, vn, vn);
      sink(row, -dx, vs, vs);
      sink(row, dy, ue, ve);
      sink(row, -dy, uw, vw);
      sink(row, -0.5 * dx, vc, vn);
      sink(row, 0.5 * dx, vc, vs);
      sink(row, -0.5 * dy, vc, ue);
      sink(row, 0.5 * dy, vc, uw);
    }
}

void check_v(const FluidGrid& g, const Vec& v) {
  if (v.size() != g.n_f)
    throw DimensionError("convective: expected length " + std::to_string(g.n_f) + ", got " +
                         std::to_string(v.size()));
}

}  // namespace

Vec convective(const FluidGrid& grid, const Vec& v, const SideVelocities& side_vel) {
  check_v(grid, v);
  Vec n = Vec::Zero(grid.n_f);
  for_each_term(grid, side_vel, [&](int row, double s, const Samp& a, const Samp& b) {
    n[row] += s * a.eval(v) * b.eval(v);
  });
  return n;
}

Vec convective(const FluidGrid& grid, const Vec& v) {
  return convective(grid, v, grid.base_side_velocities());
}

SpMat convective_jacobian(const FluidGrid& grid, const Vec& v, const SideVelocities& side_vel) {
  check_v(grid, v);
  std::vector<Trip> t;
  t.reserve(static_cast<size_t>(grid.n_f) * 16);
  for_each_term(grid, side_vel, [&](int row, double s, const Samp& a, const Samp& b) {
    const double va = a.eval(v), vb = b.eval(v);
    for (int k = 0; k < b.n; ++k) t.emplace_back(row, b.idx[k], s * va * b.w[k]);
    for (int k = 0; k < a.n; ++k) t.emplace_back(row, a.idx[k], s * vb * a.w[k]);
  });
  SpMat jac(grid.n_f, grid.n_f);
  jac.setFromTriplets(t.begin(), t.end());
  jac.makeCompressed();
  return jac;
}

SpMat convective_jacobian(const FluidGrid& grid, const Vec& v) {
  return convective_jacobian(grid, v, grid.base_side_velocities());
}

}  // namespace vfsim
