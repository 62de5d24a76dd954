// File: coupling.cpp -- interface operator assembly and pose derivatives.
#include "coupling.hpp"

#include <cmath>

#include "kernel.hpp"

namespace vfsim {

namespace {

struct GaussRule {
  int n;
  double xi[5];  // abscissae on [0, 1]
  double w[5];   // weights summing to 1
};

GaussRule gauss_rule(int order) {
  if (order < 1 || order > 5)
    throw ConfigValidationError("coupling: quadrature order must be between 1 and 5");
  GaussRule r{};
  r.n = order;
  switch (order) {
    case 1:
      r.xi[0] = 0.5;
      r.w[0] = 1.0;
      break;
    case 2: {
      const double d = 0.5 / std::sqrt(3.0);
      r.xi[0] = 0.5 - d;
      r.xi[1] = 0.5 + d;
      r.w[0] = r.w[1] = 0.5;
      break;
    }
    case 3: {
      const double d = 0.5 * std::sqrt(3.0 / 5.0);
      r.xi[0] = 0.5 - d;
      r.xi[1] = 0.5;
      r.xi[2] = 0.5 + d;
      r.w[0] = r.w[2] = 5.0 / 18.0;
      r.w[1] = 8.0 / 18.0;
      break;
    }
    case 4: {
      const double a = 0.5 * std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = 0.5 * std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 72.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 72.0;
      r.xi[0] = 0.5 - b;
      r.xi[1] = 0.5 - a;
      r.xi[2] = 0.5 + a;
      r.xi[3] = 0.5 + b;
      r.w[0] = r.w[3] = wb;
      r.w[1] = r.w[2] = wa;
      break;
    }
    case 5: {
      const double a = 0.5 / 3.0 * std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0));
      const double b = 0.5 / 3.0 * std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0));
      const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 1800.0;
      const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 1800.0;
      r.xi[0] = 0.5 - b;
      r.xi[1] = 0.5 - a;
      r.xi[2] = 0.5;
      r.xi[3] = 0.5 + a;
      r.xi[4] = 0.5 + b;
      r.w[0] = r.w[4] = wb;
      r.w[1] = r.w[3] = wa;
      r.w[2] = 64.0 / 225.0;
      break;
    }
  }
  return r;
}

// Walks the faces of component `comp` inside the kernel window of world
// point P. Emits (face, w, dwx, dwy) with w = phi(rx) phi(ry) and
// (dwx, dwy) = dw/dP. Periodic wrap-around can revisit a face; callers
// accumulate, which matches the periodized kernel.
template <class Sink>
void for_each_face(const FluidGrid& g, int comp, const Vec2& P, Sink&& sink) {
  const auto& c = g.config;
  const double offx = comp == 0 ? 0.0 : 0.5;
  const double offy = comp == 0 ? 0.5 : 0.0;
  const double tx = (P[0] - c.origin[0]) / c.dx - offx;
  const double ty = (P[1] - c.origin[1]) / c.dy - offy;
  const int i0 = static_cast<int>(std::ceil(tx - 1.5));
  const int i1 = static_cast<int>(std::floor(tx + 1.5));
  const int j0 = static_cast<int>(std::ceil(ty - 1.5));
  const int j1 = static_cast<int>(std::floor(ty + 1.5));
  const int ni = comp == 0 ? g.u_cols() : c.nx;
  const int nj = comp == 0 ? c.ny : g.v_rows();
  for (int j = j0; j <= j1; ++j) {
    if (!g.periodic_y && (j < 0 || j >= nj)) continue;
    const double wy = kernel_weight(j - ty);
    const double dwy = -kernel_weight_derivative(j - ty) / c.dy;
    for (int i = i0; i <= i1; ++i) {
      if (!g.periodic_x && (i < 0 || i >= ni)) continue;
      const double wx = kernel_weight(i - tx);
      const double dwx = -kernel_weight_derivative(i - tx) / c.dx;
      // phi and phi' vanish together at the support edge, so a zero factor
      // zeroes the weight and both derivatives at once.
      if (wx == 0.0 || wy == 0.0) continue;
      const int f = comp == 0 ? g.u_index(i, j) : g.v_index(i, j);
      sink(f, wx * wy, dwx * wy, wx * dwy);
    }
  }
}

void check_margin(const FluidGrid& g, const BodySystem& sys, const std::vector<Vec2>& nodes) {
  const auto& c = g.config;
  const double mx = 1.5 * c.dx, my = 1.5 * c.dy;
  const auto off = sys.node_offsets();
  for (int b = 0; b < sys.n_bodies(); ++b)
    for (int k = off[b]; k < off[b + 1]; ++k) {
      const Vec2& x = nodes[k];
      const bool bad_x =
          !g.periodic_x &&
          (x[0] - c.origin[0] < mx || c.origin[0] + c.nx * c.dx - x[0] < mx);
      const bool bad_y =
          !g.periodic_y &&
          (x[1] - c.origin[1] < my || c.origin[1] + c.ny * c.dy - x[1] < my);
      if (bad_x || bad_y)
        throw GeometryError(
            "coupling: node " + std::to_string(k - off[b]) + " of body " + std::to_string(b) +
            " at (" + std::to_string(x[0]) + ", " + std::to_string(x[1]) +
            ") is within one kernel support (1.5 spacings) of a domain side");
    }
}

}  // namespace

Coupling build_coupling(const FluidGrid& grid, const BodySystem& sys, const Vec& q,
                        CouplingMode mode, int quad_order) {
  const GaussRule rule = gauss_rule(quad_order);
  const auto nodes = world_nodes(sys, q);
  check_margin(grid, sys, nodes);

  Coupling cpl;
  cpl.mode = mode;
  cpl.n_f = grid.n_f;
  cpl.n_q = sys.n_q();
  const auto off = sys.node_offsets();

  if (mode == CouplingMode::node_collocation) {
    cpl.n_rows = sys.n_nodes();
    cpl.quad.reserve(cpl.n_rows);
    for (int b = 0; b < sys.n_bodies(); ++b) {
      const Vec2 c(q[3 * b], q[3 * b + 1]);
      for (int k = off[b]; k < off[b + 1]; ++k)
        cpl.quad.push_back({k, b, 1.0, nodes[k], nodes[k] - c});
    }
    cpl.anchor = cpl.quad;
  } else {
    cpl.n_rows = sys.n_segments();
    cpl.quad.reserve(static_cast<size_t>(cpl.n_rows) * rule.n);
    cpl.anchor.reserve(cpl.n_rows);
    int row = 0;
    for (int b = 0; b < sys.n_bodies(); ++b) {
      const Vec2 c(q[3 * b], q[3 * b + 1]);
      for (const auto& seg : sys.meshes[b].segments) {
        const Vec2 a = nodes[off[b] + seg[0]];
        const Vec2 e = nodes[off[b] + seg[1]];
        if ((e - a).norm() < 1e-12 * std::min(grid.config.dx, grid.config.dy))
          throw GeometryError("coupling: zero-length segment on body " + std::to_string(b));
        for (int g = 0; g < rule.n; ++g) {
          const Vec2 x = a + rule.xi[g] * (e - a);
          cpl.quad.push_back({row, b, rule.w[g], x, x - c});
        }
        const Vec2 mid = 0.5 * (a + e);
        cpl.anchor.push_back({row, b, 1.0, mid, mid - c});
        ++row;
      }
    }
  }

  std::vector<Trip> te, tj;
  te.reserve(cpl.quad.size() * 20);
  tj.reserve(cpl.anchor.size() * 4);
  for (const auto& s : cpl.quad)
    for (int comp = 0; comp < 2; ++comp)
      for_each_face(grid, comp, s.world, [&](int f, double w, double, double) {
        te.emplace_back(2 * s.row + comp, f, s.weight * w);
      });
  for (const auto& s : cpl.anchor) {
    tj.emplace_back(2 * s.row, 3 * s.body, 1.0);
    tj.emplace_back(2 * s.row, 3 * s.body + 2, -s.arm[1]);
    tj.emplace_back(2 * s.row + 1, 3 * s.body + 1, 1.0);
    tj.emplace_back(2 * s.row + 1, 3 * s.body + 2, s.arm[0]);
  }

  cpl.E.resize(2 * cpl.n_rows, cpl.n_f);
  cpl.E.setFromTriplets(te.begin(), te.end());
  cpl.E.makeCompressed();
  cpl.J.resize(2 * cpl.n_rows, cpl.n_q);
  cpl.J.setFromTriplets(tj.begin(), tj.end());
  cpl.J.makeCompressed();
  return cpl;
}

SpMat interp_pose_jacobian(const FluidGrid& grid, const Coupling& cpl, const Vec& vf) {
  if (vf.size() != cpl.n_f)
    throw DimensionError("interp_pose_jacobian: expected fluid velocity length " +
                         std::to_string(cpl.n_f) + ", got " + std::to_string(vf.size()));
  std::vector<Trip> t;
  for (const auto& s : cpl.quad) {
    const Vec2 dtheta = perp(s.arm);
    for (int comp = 0; comp < 2; ++comp) {
      const int row = 2 * s.row + comp;
      double gx = 0.0, gy = 0.0;  // d(row value)/dP
      for_each_face(grid, comp, s.world, [&](int f, double, double dwx, double dwy) {
        gx += dwx * vf[f];
        gy += dwy * vf[f];
      });
      t.emplace_back(row, 3 * s.body, s.weight * gx);
      t.emplace_back(row, 3 * s.body + 1, s.weight * gy);
      t.emplace_back(row, 3 * s.body + 2, s.weight * (gx * dtheta[0] + gy * dtheta[1]));
    }
  }
  SpMat j(2 * cpl.n_rows, cpl.n_q);
  j.setFromTriplets(t.begin(), t.end());
  j.makeCompressed();
  return j;
}

SpMat interp_dual_pose_jacobian(const FluidGrid& grid, const Coupling& cpl, const Vec& lam) {
  if (lam.size() != 2 * cpl.n_rows)
    throw DimensionError("interp_dual_pose_jacobian: expected multiplier length " +
                         std::to_string(2 * cpl.n_rows) + ", got " + std::to_string(lam.size()));
  std::vector<Trip> t;
  for (const auto& s : cpl.quad) {
    const Vec2 dtheta = perp(s.arm);
    for (int comp = 0; comp < 2; ++comp) {
      const double l = s.weight * lam[2 * s.row + comp];
      if (l == 0.0) continue;
      for_each_face(grid, comp, s.world, [&](int f, double, double dwx, double dwy) {
        t.emplace_back(f, 3 * s.body, l * dwx);
        t.emplace_back(f, 3 * s.body + 1, l * dwy);
        t.emplace_back(f, 3 * s.body + 2, l * (dwx * dtheta[0] + dwy * dtheta[1]));
      });
    }
  }
  SpMat j(cpl.n_f, cpl.n_q);
  j.setFromTriplets(t.begin(), t.end());
  j.makeCompressed();
  return j;
}

SpMat body_map_pose_jacobian(const Coupling& cpl, const Vec& vr) {
  if (vr.size() != cpl.n_q)
    throw DimensionError("body_map_pose_jacobian: expected body velocity length " +
                         std::to_string(cpl.n_q) + ", got " + std::to_string(vr.size()));
  std::vector<Trip> t;
  t.reserve(cpl.anchor.size() * 2);
  for (const auto& s : cpl.anchor) {
    // site velocity = v_c + omega * perp(arm); d/dtheta = -omega * arm
    const double omega = vr[3 * s.body + 2];
    t.emplace_back(2 * s.row, 3 * s.body + 2, -omega * s.arm[0]);
    t.emplace_back(2 * s.row + 1, 3 * s.body + 2, -omega * s.arm[1]);
  }
  SpMat j(2 * cpl.n_rows, cpl.n_q);
  j.setFromTriplets(t.begin(), t.end());
  j.makeCompressed();
  return j;
}

SpMat body_map_dual_pose_jacobian(const Coupling& cpl, const Vec& lam) {
  if (lam.size() != 2 * cpl.n_rows)
    throw DimensionError("body_map_dual_pose_jacobian: expected multiplier length " +
                         std::to_string(2 * cpl.n_rows) + ", got " + std::to_string(lam.size()));
  std::vector<Trip> t;
  t.reserve(cpl.anchor.size());
  for (const auto& s : cpl.anchor) {
    const Vec2 l(lam[2 * s.row], lam[2 * s.row + 1]);
    t.emplace_back(3 * s.body + 2, 3 * s.body + 2, -s.arm.dot(l));
  }
  SpMat j(cpl.n_q, cpl.n_q);
  j.setFromTriplets(t.begin(), t.end());
  j.makeCompressed();
  return j;
}

Vec body_force_from_duals(const Coupling& cpl, const Vec& lam, double h) {
  if (lam.size() != 2 * cpl.n_rows)
    throw DimensionError("body_force_from_duals: expected multiplier length " +
                         std::to_string(2 * cpl.n_rows) + ", got " + std::to_string(lam.size()));
  if (!(h > 0.0)) throw ConfigValidationError("body_force_from_duals: h must be positive");
  return cpl.J.transpose() * lam / h;
}

}  // namespace vfsim
