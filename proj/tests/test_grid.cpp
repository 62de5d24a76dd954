/// @file test_grid.cpp
/// MAC grid operators: assembly invariants, hand-evaluated stencil rows,
/// adjointness and order-of-accuracy checks.
#include <doctest.h>

#include <cmath>
#include <random>

#include "grid.hpp"

using namespace vfsim;

namespace {

GridConfig square_config(int n, double cell, BcKind x_kind, BcKind y_kind) {
  GridConfig c;
  c.nx = c.ny = n;
  c.dx = c.dy = cell;
  c.bc[side_left].kind = c.bc[side_right].kind = x_kind;
  c.bc[side_bottom].kind = c.bc[side_top].kind = y_kind;
  return c;
}

Vec random_field(const FluidGrid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec v(g.n_f);
  for (int k = 0; k < g.n_f; ++k) v[k] = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("grid config validation") {
  FluidProperties props;
  CHECK_THROWS_AS(build_grid(square_config(1, 1.0, BcKind::wall, BcKind::wall), props),
                  ConfigValidationError);
  auto bad = square_config(4, 1.0, BcKind::wall, BcKind::wall);
  bad.dx = 0.0;
  CHECK_THROWS_AS(build_grid(bad, props), ConfigValidationError);
  auto unpaired = square_config(4, 1.0, BcKind::wall, BcKind::wall);
  unpaired.bc[side_left].kind = BcKind::periodic;  // right stays wall
  CHECK_THROWS_AS(build_grid(unpaired, props), ConfigValidationError);
  FluidProperties bad_props;
  bad_props.rho = -1.0;
  CHECK_THROWS_AS(build_grid(square_config(4, 1.0, BcKind::wall, BcKind::wall), bad_props),
                  ConfigValidationError);
}

TEST_CASE("mass matrix and DOF counts") {
  FluidProperties props;
  props.rho = 2.5;

  SUBCASE("all-wall 2x2 unit cells: Mf = rho * I") {
    auto g = build_grid(square_config(2, 1.0, BcKind::wall, BcKind::wall), props);
    CHECK(g.n_u == 3 * 2);
    CHECK(g.n_v == 2 * 3);
    for (int k = 0; k < g.n_f; ++k) CHECK(g.mf[k] == 2.5);
  }
  SUBCASE("periodic-x 4x4 identifies the wrap column") {
    auto g = build_grid(square_config(4, 1.0, BcKind::periodic, BcKind::wall), props);
    CHECK(g.n_u == 16);  // 4*4, not 5*4
    CHECK(g.n_v == 4 * 5);
    CHECK(g.u_index(4, 2) == g.u_index(0, 2));
  }
  SUBCASE("fully periodic 8x8") {
    auto g = build_grid(square_config(8, 0.125, BcKind::periodic, BcKind::periodic), props);
    CHECK(g.n_u == 64);
    CHECK(g.n_v == 64);
    CHECK(g.B.rows() == 0);
  }
}

TEST_CASE("divergence") {
  FluidProperties props;

  SUBCASE("uniform field on a fully periodic grid is divergence-free") {
    auto g = build_grid(square_config(8, 0.125, BcKind::periodic, BcKind::periodic), props);
    Vec v(g.n_f);
    for (int k = 0; k < g.n_u; ++k) v[k] = 1.0;
    for (int k = g.n_u; k < g.n_f; ++k) v[k] = 0.0;
    CHECK(divergence(g, v).lpNorm<Eigen::Infinity>() == 0.0);
  }
  SUBCASE("linear field u = x integrates to dx*dy per cell") {
    auto g = build_grid(square_config(3, 1.0, BcKind::wall, BcKind::wall), props);
    Vec v = Vec::Zero(g.n_f);
    for (int k = 0; k < g.n_u; ++k) v[k] = g.u_x[k];
    Vec d = divergence(g, v);
    for (int c = 0; c < g.n_p; ++c) CHECK(d[c] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("cell divergences telescope to zero on a periodic grid") {
    auto g = build_grid(square_config(8, 0.5, BcKind::periodic, BcKind::periodic), props);
    Vec v = random_field(g, 42);
    CHECK(std::abs(divergence(g, v).sum()) <= 1e-13);
  }
  SUBCASE("size mismatch") {
    auto g = build_grid(square_config(3, 1.0, BcKind::wall, BcKind::wall), props);
    CHECK_THROWS_AS(divergence(g, Vec::Zero(g.n_f + 1)), DimensionError);
  }
}

TEST_CASE("gradient and adjointness") {
  FluidProperties props;

  SUBCASE("constant pressure is in the nullspace on a periodic grid") {
    auto g = build_grid(square_config(6, 0.25, BcKind::periodic, BcKind::periodic), props);
    CHECK(gradient(g, Vec::Constant(g.n_p, 3.7)).lpNorm<Eigen::Infinity>() < 1e-14);
  }
  SUBCASE("p = x on unit cells: interior u-faces get -dx*dy") {
    auto g = build_grid(square_config(3, 1.0, BcKind::wall, BcKind::wall), props);
    Vec p = g.cell_x;
    Vec gp = gradient(g, p);
    for (int j = 0; j < 3; ++j)
      for (int i = 1; i <= 2; ++i)
        CHECK(gp[g.u_index(i, j)] == doctest::Approx(-1.0).epsilon(1e-14));
  }
  SUBCASE("divergence matrix equals G^T element-wise") {
    for (auto kinds : {std::pair{BcKind::wall, BcKind::wall},
                       std::pair{BcKind::periodic, BcKind::wall},
                       std::pair{BcKind::periodic, BcKind::periodic},
                       std::pair{BcKind::inflow, BcKind::outflow}}) {
      auto cfg = square_config(5, 0.3, kinds.first, kinds.second);
      auto g = build_grid(cfg, props);
      SpMat gt = g.G.transpose();
      CHECK((g.D - gt).norm() == 0.0);
    }
  }
  SUBCASE("<G p, v> = <p, G^T v> for random inputs") {
    auto g = build_grid(square_config(5, 0.3, BcKind::wall, BcKind::wall), props);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vec p(g.n_p);
    for (int k = 0; k < g.n_p; ++k) p[k] = dist(rng);
    Vec v = random_field(g, 8);
    CHECK(gradient(g, p).dot(v) ==
          doctest::Approx(p.dot(divergence(g, v))).epsilon(1e-13));
  }
}

TEST_CASE("laplacian") {
  FluidProperties props;

  SUBCASE("annihilates constants on a fully periodic grid") {
    auto g = build_grid(square_config(8, 0.125, BcKind::periodic, BcKind::periodic), props);
    Vec v = Vec::Constant(g.n_f, 2.0);
    CHECK(laplacian_apply(g, v).lpNorm<Eigen::Infinity>() < 1e-13);
  }
  SUBCASE("symmetric and negative semidefinite on a fully periodic grid") {
    auto g = build_grid(square_config(8, 0.125, BcKind::periodic, BcKind::periodic), props);
    SpMat lt = g.L.transpose();
    CHECK((g.L - lt).norm() == 0.0);
    for (unsigned seed : {1u, 2u, 3u}) {
      Vec v = random_field(g, seed);
      CHECK(v.dot(laplacian_apply(g, v)) <= 0.0);
    }
  }
  SUBCASE("sine eigenfunction converges at 2nd order") {
    auto error_at = [&](int n) {
      auto cfg = square_config(n, 1.0 / n, BcKind::periodic, BcKind::periodic);
      auto g = build_grid(cfg, props);
      Vec v = Vec::Zero(g.n_f);
      for (int k = 0; k < g.n_u; ++k) v[k] = std::sin(2.0 * M_PI * g.u_x[k]);
      const double lam = 4.0 * M_PI * M_PI * cfg.dx * cfg.dy;
      Vec lv = laplacian_apply(g, v);
      double err = 0.0, ref = 0.0;
      for (int k = 0; k < g.n_u; ++k) {
        err += std::pow(lv[k] + lam * v[k], 2);
        ref += std::pow(lam * v[k], 2);
      }
      return std::sqrt(err / ref);
    };
    const double e16 = error_at(16), e32 = error_at(32);
    CHECK(e32 < e16);
    CHECK(e16 / e32 >= 3.5);
  }
  SUBCASE("wall ghost row: channel grid stencil frozen by hand") {
    // 4x4, periodic in x, walls in y, unit cells. Row of u(0,0):
    // x-part wraps (+1 at u(1,0) and u(3,0)), y-part has one real neighbor
    // (+1 at u(0,1)) and a reflected ghost, giving diagonal -2 - 3 = -5.
    auto g = build_grid(square_config(4, 1.0, BcKind::periodic, BcKind::wall), props);
    const int r = g.u_index(0, 0);
    Eigen::MatrixXd dense = Eigen::MatrixXd(g.L);
    CHECK(dense(r, g.u_index(1, 0)) == 1.0);
    CHECK(dense(r, g.u_index(3, 0)) == 1.0);
    CHECK(dense(r, g.u_index(0, 1)) == 1.0);
    CHECK(dense(r, r) == -5.0);

    SideVelocities sv{};
    sv[side_bottom] = Vec2(0.3, 0.0);
    Vec l = laplacian_bc(g, sv);
    CHECK(l[g.u_index(0, 0)] == doctest::Approx(0.6));
    CHECK(l[g.u_index(0, 1)] == 0.0);
  }
  SUBCASE("outflow side drops the boundary flux") {
    // Left inflow, right outflow, walls top/bottom. The right-boundary
    // u-face keeps only its west neighbor in x.
    auto cfg = square_config(4, 1.0, BcKind::wall, BcKind::wall);
    cfg.bc[side_left] = {BcKind::inflow, Vec2(1.0, 0.0)};
    cfg.bc[side_right].kind = BcKind::outflow;
    auto g = build_grid(cfg, props);
    const int r = g.u_index(4, 1);  // interior j
    Eigen::MatrixXd dense = Eigen::MatrixXd(g.L);
    CHECK(dense(r, g.u_index(3, 1)) == 1.0);
    CHECK(dense(r, g.u_index(4, 0)) == 1.0);
    CHECK(dense(r, g.u_index(4, 2)) == 1.0);
    CHECK(dense(r, r) == -3.0);
  }
}

TEST_CASE("boundary rows") {
  FluidProperties props;

  SUBCASE("all-wall 4x4: one row per boundary-normal DOF, zero values") {
    auto g = build_grid(square_config(4, 1.0, BcKind::wall, BcKind::wall), props);
    auto [B, vbc] = boundary_rows(g);
    CHECK(B->rows() == 16);
    CHECK(vbc.lpNorm<Eigen::Infinity>() == 0.0);
    // Each row selects exactly one DOF.
    for (int r = 0; r < B->rows(); ++r) CHECK(B->row(r).sum() == 1.0);
  }
  SUBCASE("inflow left selects left u-faces with the free-stream value") {
    auto cfg = square_config(4, 1.0, BcKind::wall, BcKind::wall);
    cfg.bc[side_left] = {BcKind::inflow, Vec2(1.0, 0.0)};
    cfg.bc[side_right].kind = BcKind::outflow;
    auto g = build_grid(cfg, props);
    auto [B, vbc] = boundary_rows(g);
    CHECK(B->rows() == 4 + 4 + 4);  // left + bottom + top, no outflow rows
    Vec probe = Vec::Zero(g.n_f);
    for (int j = 0; j < 4; ++j) probe[g.u_index(0, j)] = 9.0;
    Vec sel = *B * probe;
    int hits = 0;
    for (int r = 0; r < sel.size(); ++r)
      if (sel[r] == 9.0) ++hits;
    CHECK(hits == 4);
    for (const auto& br : g.b_rows)
      if (br.side == side_left) CHECK(vbc[br.row] == 1.0);
  }
  SUBCASE("fully periodic grid has no boundary rows") {
    auto g = build_grid(square_config(4, 1.0, BcKind::periodic, BcKind::periodic), props);
    CHECK(boundary_rows(g).first->rows() == 0);
  }
}

TEST_CASE("vorticity") {
  FluidProperties props;

  SUBCASE("constant field has zero curl") {
    auto g = build_grid(square_config(6, 0.5, BcKind::periodic, BcKind::periodic), props);
    Vec v = Vec::Constant(g.n_f, 1.3);
    CHECK(vorticity(g, v).lpNorm<Eigen::Infinity>() < 1e-13);
  }
  SUBCASE("rigid rotation gives omega = 2 at interior nodes") {
    auto g = build_grid(square_config(8, 0.25, BcKind::wall, BcKind::wall), props);
    const double cx = 1.0, cy = 1.0;
    Vec v(g.n_f);
    for (int k = 0; k < g.n_u; ++k) v[k] = -(g.u_y[k] - cy);
    for (int k = 0; k < g.n_v; ++k) v[g.n_u + k] = g.v_x[k] - cx;
    Vec w = vorticity(g, v);
    for (int j = 1; j < 8; ++j)
      for (int i = 1; i < 8; ++i)
        CHECK(w[j * 9 + i] == doctest::Approx(2.0).epsilon(1e-13));
  }
  SUBCASE("parabolic profile gives a linear vorticity ramp") {
    auto g = build_grid(square_config(8, 0.125, BcKind::periodic, BcKind::wall), props);
    Vec v = Vec::Zero(g.n_f);
    for (int k = 0; k < g.n_u; ++k) v[k] = g.u_y[k] * (1.0 - g.u_y[k]);
    Vec w = vorticity(g, v);
    // omega = -du/dy = 2y - 1, exact for the central difference of a parabola.
    for (int j = 1; j < 8; ++j) {
      const double y = j * 0.125;
      CHECK(w[j * 9 + 3] == doctest::Approx(2.0 * y - 1.0).epsilon(1e-12));
    }
  }
}
