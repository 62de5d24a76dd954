// File: acceptance_main.cpp
// Scenario-level acceptance checks, one criterion per invocation:
//
//   acceptance <n>     n in 1..8
//
// prints exactly one PASS/FAIL line for that criterion and exits 0/1.
// Runs write their outputs under ./acceptance-out/.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "runner.hpp"

namespace {

using namespace vfsim;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string details;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return std::string(buf);
}

Vec random_field(int n, unsigned seed, double scale) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Vec v(n);
  for (int k = 0; k < n; ++k) v[k] = dist(rng);
  return v;
}

GridConfig square_grid(int n, double len, BcKind x_kind, BcKind y_kind) {
  GridConfig gc;
  gc.nx = gc.ny = n;
  gc.dx = gc.dy = len / n;
  gc.bc[side_left].kind = gc.bc[side_right].kind = x_kind;
  gc.bc[side_bottom].kind = gc.bc[side_top].kind = y_kind;
  return gc;
}

// ---------------------------------------------------------------------------
// 1. Poiseuille profile convergence

Outcome criterion_poiseuille() {
  double err[2] = {0.0, 0.0}, wall[2] = {0.0, 0.0};
  const int cells[2] = {16, 32};
  for (int i = 0; i < 2; ++i) {
    RunConfig cfg;
    cfg.scenario.kind = ScenarioKind::poiseuille;
    cfg.scenario.props.mu = 0.1;
    cfg.scenario.duration = 40.0;
    cfg.scenario.poiseuille.cells = cells[i];
    const double dy = cfg.scenario.poiseuille.height / cells[i];
    // one step deadbeats the stiffest viscous mode, so the midpoint run
    // settles monotonically instead of ringing
    cfg.integrator.h = cfg.scenario.props.rho * dy * dy / (2.0 * cfg.scenario.props.mu);
    cfg.integrator.newton_tol = 1e-11;
    cfg.snapshot_every = 1000000;
    cfg.output_dir = "acceptance-out/criterion1/cells" + std::to_string(cells[i]);
    const auto t0 = Clock::now();
    const RunReport rep = run(cfg);
    wall[i] = seconds_since(t0);
    if (rep.profile_error < 0.0)
      return {false, fmt("poiseuille run at %d cells did not settle", cells[i])};
    err[i] = rep.profile_error;
  }
  const double ratio = err[0] / err[1];
  const bool pass =
      err[1] < 0.02 && ratio >= 3.5 && wall[0] < 60.0 && wall[1] < 60.0;
  return {pass, fmt("poiseuille profile: err16=%.5f err32=%.5f (need <0.02) "
                    "ratio=%.2f (need >=3.5), wall %.0fs/%.0fs (need <60s each)",
                    err[0], err[1], ratio, wall[0], wall[1])};
}

// ---------------------------------------------------------------------------
// 2. Disc drag at Re=40, desk scale

Outcome criterion_re40() {
  RunConfig cfg;
  cfg.scenario.kind = ScenarioKind::disc;
  cfg.scenario.duration = 45.0;
  cfg.scenario.disc.reynolds = 40.0;
  cfg.scenario.disc.resolution = 128;
  cfg.integrator.h = 0.15;
  cfg.snapshot_every = 1000000;
  cfg.output_dir = "acceptance-out/criterion2";
  const auto t0 = Clock::now();
  const RunReport rep = run(cfg);
  const double wall = seconds_since(t0);
  if (!rep.has_aero) return {false, "disc run produced no force coefficients"};
  const double cd = rep.aero.cd;
  const bool pass = cd >= 1.50 && cd <= 1.90 && wall <= 900.0;
  return {pass, fmt("Re=40 drag at 128x128: cd=%.3f (need 1.50..1.90; domain "
                    "blockage widens cd versus the 250x250 reference band "
                    "1.58..1.78), wall %.0fs (need <=900s); the 250x250 run is "
                    "a long job: vfsim bench disc-re40 --paper-scale",
                    cd, wall)};
}

// ---------------------------------------------------------------------------
// 3. Disc shedding at Re=100, desk scale

Outcome criterion_re100() {
  RunConfig cfg;
  cfg.scenario.kind = ScenarioKind::disc;
  cfg.scenario.duration = 120.0;
  cfg.scenario.disc.reynolds = 100.0;
  cfg.scenario.disc.resolution = 128;
  cfg.scenario.disc.shedding_trigger = true;
  cfg.integrator.h = 0.12;
  cfg.snapshot_every = 1000000;
  cfg.output_dir = "acceptance-out/criterion3";
  const auto t0 = Clock::now();
  const RunReport rep = run(cfg);
  const double wall = seconds_since(t0);
  if (!rep.has_aero) return {false, "disc run produced no force coefficients"};
  const double st = rep.aero.strouhal, peak = rep.aero.peak_ratio;
  const bool pass = st >= 0.14 && st <= 0.19 && peak >= 10.0;
  return {pass, fmt("Re=100 shedding at 128x128: St=%.4f (need 0.14..0.19), "
                    "spectral peak %.1fx noise floor (need >=10x), cd=%.3f "
                    "cl_amplitude=%.3f, wall %.0fs",
                    st, peak, rep.aero.cd, rep.aero.cl_amplitude, wall)};
}

// ---------------------------------------------------------------------------
// 4. Conservation: inviscid periodic energy, divergence, free-body momentum

Outcome criterion_conservation() {
  FluidProperties props;
  props.rho = 1.0;
  props.mu = 0.0;
  IntegratorConfig cfg;
  cfg.h = 0.01;
  cfg.newton_tol = 1e-11;

  const int n = 16;
  const FluidGrid g =
      build_grid(square_grid(n, 1.0, BcKind::periodic, BcKind::periodic), props);

  // face velocities from a corner streamfunction are divergence-free by
  // construction
  auto psi = [&](int i, int j) {
    const double x = i * g.config.dx, y = j * g.config.dy;
    return 0.10 * std::sin(2.0 * M_PI * x) * std::sin(2.0 * M_PI * y) +
           0.03 * std::sin(4.0 * M_PI * x) * std::sin(2.0 * M_PI * y);
  };
  Vec v0 = Vec::Zero(g.n_f);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      v0[g.u_index(i, j)] = (psi(i, j + 1) - psi(i, j)) / g.config.dy;
      v0[g.v_index(i, j)] = -(psi(i + 1, j) - psi(i, j)) / g.config.dx;
    }

  const ImplicitStepper fluid(g, BodySystem{}, cfg);
  SimState s = fluid.make_state(0.0, v0, Vec(), Vec());
  const double e0 = fluid.kinetic_energy(s);
  double max_drift = 0.0, max_div = 0.0;
  for (int k = 0; k < 1000; ++k) {
    s = fluid.step(s).state;
    max_drift = std::max(max_drift, std::abs(fluid.kinetic_energy(s) - e0) / e0);
    max_div = std::max(max_div, fluid.divergence_norm(s));
  }

  // a body with no boundary mesh, joints or gravity keeps its momentum
  BodySystem free_body;
  RigidBody2D body;
  body.mass = 0.7;
  body.inertia = 0.2;
  free_body.bodies.push_back(body);
  free_body.meshes.push_back(BoundaryMesh{});
  const FluidGrid g8 =
      build_grid(square_grid(8, 1.0, BcKind::periodic, BcKind::periodic), props);
  const ImplicitStepper rigid(g8, free_body, cfg);
  Vec q0(3), vr0(3);
  q0 << 0.5, 0.5, 0.0;
  vr0 << 0.3, -0.2, 0.7;
  SimState b = rigid.make_state(0.0, Vec::Zero(g8.n_f), q0, vr0);
  double max_dv = 0.0;
  for (int k = 0; k < 200; ++k) {
    b = rigid.step(b).state;
    max_dv = std::max(max_dv, (b.vr - vr0).lpNorm<Eigen::Infinity>());
  }

  const bool pass =
      max_drift < 1e-6 && max_div <= cfg.newton_tol && max_dv <= cfg.newton_tol;
  return {pass, fmt("conservation over 1000 inviscid periodic steps: energy "
                    "drift %.2e (need <1e-6), divergence %.2e (need <=%.0e); "
                    "free-body velocity drift %.2e over 200 steps (need <=%.0e)",
                    max_drift, max_div, cfg.newton_tol, max_dv, cfg.newton_tol)};
}

// ---------------------------------------------------------------------------
// 5. Operator identities and analytic Jacobians

double fd_error(const SpMat& jac, const std::function<Vec(const Vec&)>& f, const Vec& at) {
  const double eps = 1e-6;
  double max_diff = 0.0, max_entry = 1.0;
  for (int c = 0; c < jac.cols(); ++c) {
    Vec xp = at, xm = at;
    xp[c] += eps;
    xm[c] -= eps;
    const Vec col = (f(xp) - f(xm)) / (2.0 * eps);
    max_diff = std::max(max_diff, (col - Vec(jac.col(c))).lpNorm<Eigen::Infinity>());
    max_entry = std::max(max_entry, Vec(jac.col(c)).lpNorm<Eigen::Infinity>());
  }
  return max_diff / max_entry;
}

Outcome criterion_operators() {
  const auto t0 = Clock::now();
  FluidProperties props;
  props.rho = 1.2;
  props.mu = 0.03;
  props.g = Vec2(0.1, -0.4);

  // adjoint pair: divergence rows are exactly the transposed gradient
  double max_adj = 0.0;
  const BcKind kinds[3][2] = {{BcKind::periodic, BcKind::periodic},
                              {BcKind::wall, BcKind::wall},
                              {BcKind::inflow, BcKind::wall}};
  for (const auto& k : kinds) {
    GridConfig gc = square_grid(8, 1.0, k[0], k[1]);
    if (k[0] == BcKind::inflow) {
      gc.bc[side_left].velocity = Vec2(1.0, 0.0);
      gc.bc[side_right].kind = BcKind::outflow;
    }
    const FluidGrid g = build_grid(gc, props);
    const SpMat diff = SpMat(g.G.transpose()) - g.D;
    for (int c = 0; c < diff.outerSize(); ++c)
      for (SpMat::InnerIterator it(diff, c); it; ++it)
        max_adj = std::max(max_adj, std::abs(it.value()));
  }

  // kernel partition of unity and constant reproduction on a random pose
  const FluidGrid g = build_grid(square_grid(8, 1.0, BcKind::wall, BcKind::wall), props);
  BodySystem sys;
  RigidBody2D body;
  body.mass = 0.4;
  body.inertia = 0.05;
  body.buoyancy_mass = 0.1;
  sys.bodies.push_back(body);
  BoundaryMesh diamond;
  diamond.nodes = {Vec2(0.14, 0.0), Vec2(0.0, 0.09), Vec2(-0.14, 0.0), Vec2(0.0, -0.09)};
  diamond.segments = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  sys.meshes.push_back(diamond);
  sys.constraints.push_back(ConstraintSpec::prescribed_angle(
      0, ConstraintSpec::world_frame, [](double t) { return 0.23 + 0.4 * t; }));

  std::mt19937 rng(4127);
  std::uniform_real_distribution<double> pos(0.42, 0.58), ang(-0.8, 0.8);
  Vec q(3);
  q << pos(rng), pos(rng), ang(rng);
  double max_pou = 0.0, max_const = 0.0;
  const Vec ones = Vec::Ones(g.n_f);
  Vec mixed(g.n_f);
  mixed.segment(0, g.n_u).setConstant(1.7);
  mixed.segment(g.n_u, g.n_v).setConstant(-0.6);
  for (const CouplingMode mode :
       {CouplingMode::node_collocation, CouplingMode::segment_integral}) {
    const Coupling cpl = build_coupling(g, sys, q, mode);
    const Vec sums = cpl.E * ones;
    const Vec rep = cpl.E * mixed;
    for (int r = 0; r < cpl.n_rows; ++r) {
      max_pou = std::max({max_pou, std::abs(sums[2 * r] - 1.0),
                          std::abs(sums[2 * r + 1] - 1.0)});
      max_const = std::max({max_const, std::abs(rep[2 * r] - 1.7),
                            std::abs(rep[2 * r + 1] + 0.6)});
    }
  }

  // every analytic derivative against central differences: the convective
  // Jacobian, the constraint Jacobian, the four pose derivatives of the
  // interface products, and the full KKT matrix in both coupling flavors
  const Vec v_rand = random_field(g.n_f, 31, 0.3);
  double max_fd = fd_error(
      convective_jacobian(g, v_rand),
      [&](const Vec& v) { return convective(g, v); }, v_rand);

  max_fd = std::max(max_fd, fd_error(constraint_jacobian(sys, q),
                                     [&](const Vec& qq) {
                                       return constraint_eval(sys, qq, 0.37);
                                     },
                                     q));

  const Coupling seg = build_coupling(g, sys, q, CouplingMode::segment_integral);
  const Vec lam = random_field(2 * seg.n_rows, 83, 0.4);
  Vec vr(3);
  vr << 0.2, -0.15, 0.5;
  auto at_pose = [&](const Vec& qq) {
    return build_coupling(g, sys, qq, CouplingMode::segment_integral);
  };
  max_fd = std::max(max_fd, fd_error(interp_pose_jacobian(g, seg, v_rand),
                                     [&](const Vec& qq) -> Vec { return at_pose(qq).E * v_rand; }, q));
  max_fd = std::max(max_fd, fd_error(interp_dual_pose_jacobian(g, seg, lam),
                                     [&](const Vec& qq) -> Vec { return at_pose(qq).E.transpose() * lam; }, q));
  max_fd = std::max(max_fd, fd_error(body_map_pose_jacobian(seg, vr),
                                     [&](const Vec& qq) -> Vec { return at_pose(qq).J * vr; }, q));
  max_fd = std::max(max_fd, fd_error(body_map_dual_pose_jacobian(seg, lam),
                                     [&](const Vec& qq) -> Vec { return at_pose(qq).J.transpose() * lam; }, q));

  IntegratorConfig cfg;
  cfg.h = 0.03;
  for (const CouplingMode mode :
       {CouplingMode::node_collocation, CouplingMode::segment_integral}) {
    cfg.coupling_mode = mode;
    const ImplicitStepper st(g, sys, cfg);
    const SimState prev = st.make_state(0.1, v_rand, q, vr);
    const Vec x = st.pack(prev) + random_field(st.n_unknowns(), 57, 0.03);
    max_fd = std::max(max_fd, fd_error(st.jacobian(prev, x),
                                       [&](const Vec& xx) { return st.residual(prev, xx); }, x));
  }

  const double wall = seconds_since(t0);
  const bool pass = max_adj == 0.0 && max_pou < 1e-12 && max_const < 1e-12 &&
                    max_fd < 1e-6 && wall < 60.0;
  return {pass, fmt("operators: max|G^T - D|=%.1e (need 0), partition of unity "
                    "%.1e and constant reproduction %.1e (need <1e-12), worst "
                    "analytic-vs-FD Jacobian error %.1e relative over "
                    "convective/constraint/pose/KKT checks (need <1e-6), wall %.0fs",
                    max_adj, max_pou, max_const, max_fd, wall)};
}

// ---------------------------------------------------------------------------
// 6. Shared-node multibody mesh: collocation singular, integrals solvable

Outcome criterion_shared_node() {
  FluidProperties props;
  props.rho = 1.0;
  props.mu = 0.05;
  props.g = Vec2(0.0, -1.0);

  BodySystem sys;
  RigidBody2D body;
  body.mass = 0.05;
  body.inertia = 0.001;
  body.buoyancy_mass = 0.02;
  sys.bodies.push_back(body);
  sys.bodies.push_back(body);
  BoundaryMesh diamond;
  diamond.nodes = {Vec2(0.2, 0.0), Vec2(0.0, 0.1), Vec2(-0.2, 0.0), Vec2(0.0, -0.1)};
  diamond.segments = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  sys.meshes = {diamond, diamond};
  sys.constraints.push_back(ConstraintSpec::revolute(0, 1, Vec2(0.2, 0.0), Vec2(-0.2, 0.0)));

  Vec q0(6);
  q0 << 0.8, 1.0, 0.0, 1.2, 1.0, 0.0;  // the joint node is shared at (1, 1)

  IntegratorConfig cfg;
  cfg.h = 0.01;
  const FluidGrid g = build_grid(square_grid(16, 2.0, BcKind::wall, BcKind::wall), props);

  bool node_singular = false;
  std::string node_msg;
  cfg.coupling_mode = CouplingMode::node_collocation;
  try {
    const ImplicitStepper st(g, sys, cfg);
    (void)st.step(st.rest_state(q0));
  } catch (const SingularMatrixError& e) {
    node_singular = true;
    node_msg = e.what();
  }

  cfg.coupling_mode = CouplingMode::segment_integral;
  const ImplicitStepper st(g, sys, cfg);
  SimState s = st.rest_state(q0);
  bool segment_ok = true;
  double worst = 0.0;
  for (int k = 0; k < 3 && segment_ok; ++k) {
    const StepSolution sol = st.step(s);
    segment_ok = sol.residual_norm <= cfg.newton_tol && sol.state.duals.l6.allFinite();
    worst = std::max(worst, sol.residual_norm);
    s = sol.state;
  }

  const bool named = node_msg.find("coincident boundary nodes") != std::string::npos;
  const bool pass = node_singular && named && segment_ok;
  return {pass, fmt("shared-node pair: node collocation %s (%s), segment "
                    "integrals took 3 steps with residual <=%.1e (need <=%.0e)",
                    node_singular ? "reported singular" : "did NOT report singular",
                    named ? "names coincident nodes" : "message lacks cause",
                    worst, cfg.newton_tol)};
}

// ---------------------------------------------------------------------------
// 7. Swimmer: forward thrust, quiescent zero gait, mirror symmetry

struct Trajectory {
  std::vector<double> x, y, theta;
};

Trajectory read_trajectory(const std::string& dir) {
  std::ifstream in(dir + "/trajectory.csv", std::ios::binary);
  if (!in) throw IoError("acceptance: cannot open " + dir + "/trajectory.csv");
  Trajectory tr;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() < 4) continue;
    tr.x.push_back(row[1]);
    tr.y.push_back(row[2]);
    tr.theta.push_back(row[3]);
  }
  return tr;
}

Outcome criterion_swimmer() {
  const auto t0 = Clock::now();
  auto swim = [](double amplitude, bool mirrored, const std::string& dir) {
    RunConfig cfg;
    cfg.scenario.kind = ScenarioKind::swimmer;
    cfg.scenario.props.mu = 0.005;
    cfg.scenario.swimmer.resolution = 100;
    cfg.scenario.swimmer.cycles = 5;
    cfg.scenario.swimmer.gait_amplitude = amplitude;
    cfg.scenario.swimmer.gait_phase_lag = M_PI / 3.0;
    cfg.scenario.swimmer.mirrored = mirrored;
    cfg.integrator.h = 0.02;
    cfg.snapshot_every = 1000000;
    cfg.output_dir = "acceptance-out/criterion7/" + dir;
    return run(cfg);
  };

  const RunReport main_run = swim(0.25, false, "gait");
  const RunReport zero_run = swim(0.0, false, "zero");
  const RunReport mirror_run = swim(0.25, true, "mirrored");
  const double wall = seconds_since(t0);

  const double newton_tol = 1e-8;
  const double zero_move = zero_run.displacement.norm();

  const Trajectory a = read_trajectory("acceptance-out/criterion7/gait");
  const Trajectory b = read_trajectory("acceptance-out/criterion7/mirrored");
  double mirror_err = std::numeric_limits<double>::infinity();
  if (a.x.size() == b.x.size() && !a.x.empty()) {
    mirror_err = 0.0;
    for (size_t k = 0; k < a.x.size(); ++k) {
      mirror_err = std::max(mirror_err, std::abs(a.x[k] - b.x[k]));
      mirror_err = std::max(mirror_err, std::abs((a.y[k] - 0.5) + (b.y[k] - 0.5)));
      mirror_err = std::max(mirror_err, std::abs(a.theta[k] + b.theta[k]));
    }
  }

  const double mirror_tol = 1e-7;
  const bool pass = main_run.forward_displacement > 0.0 &&
                    zero_move <= 10.0 * newton_tol && mirror_err <= mirror_tol &&
                    wall <= 1200.0;
  return {pass, fmt("swimmer at 100x100 over 5 cycles: forward displacement "
                    "%.4f (need >0), zero-gait drift %.1e (need <=%.0e), mirror "
                    "gait trajectory error %.1e (need <=%.0e), wall %.0fs "
                    "(need <=1200s)",
                    main_run.forward_displacement, zero_move, 10.0 * newton_tol,
                    mirror_err, mirror_tol, wall)};
}

// ---------------------------------------------------------------------------
// 8. Determinism: byte-identical outputs across repeated runs

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_determinism() {
  auto configure = [](int which, const std::string& dir) {
    RunConfig cfg;
    cfg.output_dir = dir;
    if (which == 0) {
      cfg.scenario.kind = ScenarioKind::poiseuille;
      cfg.scenario.props.mu = 0.1;
      cfg.scenario.duration = 40.0;
      cfg.scenario.poiseuille.cells = 8;
      cfg.integrator.h = 1.0 / (8.0 * 8.0 * 2.0 * 0.1);
      cfg.snapshot_every = 1000;
    } else if (which == 1) {
      cfg.scenario.kind = ScenarioKind::disc;
      cfg.scenario.duration = 0.5;
      cfg.scenario.disc.resolution = 32;
      cfg.scenario.disc.shedding_trigger = true;
      cfg.integrator.h = 0.05;
      cfg.snapshot_every = 5;
    } else {
      cfg.scenario.kind = ScenarioKind::swimmer;
      cfg.scenario.props.mu = 0.005;
      cfg.scenario.duration = 0.2;
      cfg.scenario.swimmer.resolution = 50;
      cfg.scenario.swimmer.gait_amplitude = 0.25;
      cfg.integrator.h = 0.02;
      cfg.snapshot_every = 5;
    }
    return cfg;
  };

  int files_compared = 0;
  for (int which = 0; which < 3; ++which) {
    const std::string base = "acceptance-out/criterion8/case" + std::to_string(which);
    const RunReport first = run(configure(which, base + "/a"));
    const RunReport second = run(configure(which, base + "/b"));
    if (first.files != second.files)
      return {false, fmt("case %d wrote different file sets", which)};
    for (const std::string& name : first.files) {
      const std::string bytes_a = read_bytes(base + "/a/" + name);
      const std::string bytes_b = read_bytes(base + "/b/" + name);
      if (bytes_a.empty() || bytes_a != bytes_b)
        return {false, fmt("case %d file %s differs between repeat runs", which,
                           name.c_str())};
      ++files_compared;
    }
  }
  return {true, fmt("determinism: %d files byte-identical across repeated "
                    "poiseuille, disc and swimmer runs",
                    files_compared)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..8>\n");
    return 2;
  }
  const int n = std::atoi(argv[1]);
  Outcome out;
  try {
    switch (n) {
      case 1: out = criterion_poiseuille(); break;
      case 2: out = criterion_re40(); break;
      case 3: out = criterion_re100(); break;
      case 4: out = criterion_conservation(); break;
      case 5: out = criterion_operators(); break;
      case 6: out = criterion_shared_node(); break;
      case 7: out = criterion_swimmer(); break;
      case 8: out = criterion_determinism(); break;
      default:
        std::fprintf(stderr, "usage: acceptance <criterion 1..8>\n");
        return 2;
    }
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s: criterion %d - %s\n", out.pass ? "PASS" : "FAIL", n,
              out.details.c_str());
  return out.pass ? 0 : 1;
}
