// File: integrator.cpp -- assembly and Newton solution of the coupled step.
#include "integrator.hpp"

#include <cmath>
#include <limits>

#ifdef VFSIM_WITH_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace vfsim {

namespace {

#ifdef VFSIM_WITH_UMFPACK
using KktSolver = Eigen::UmfPackLU<SpMat>;
#else
using KktSolver = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;
#endif

void append_block(std::vector<Trip>& t, const SpMat& m, int row0, int col0,
                  double scale = 1.0) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      t.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
}

void check_vec(const Vec& v, int n, const char* what) {
  if (v.size() != n)
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) +
                         ", got " + std::to_string(v.size()));
}

}  // namespace

ImplicitStepper::ImplicitStepper(FluidGrid grid, BodySystem bodies,
                                 const IntegratorConfig& config)
    : grid_(std::move(grid)), bodies_(std::move(bodies)), config_(config) {
  if (config_.h == 0.0) throw ConfigValidationError("integrator: h must be nonzero");
  if (!(config_.newton_tol > 0.0))
    throw ConfigValidationError("integrator: newton_tol must be positive");
  if (config_.max_newton_iters < 1)
    throw ConfigValidationError("integrator: max_newton_iters must be at least 1");
  if (config_.dual_regularization < 0.0)
    throw ConfigValidationError("integrator: dual_regularization must be non-negative");
  validate_system(bodies_);

  gauge_ = config_.pressure_gauge && !grid_.has_outflow;
  n_f_ = grid_.n_f;
  n_q_ = bodies_.n_q();
  n_p_ = grid_.n_p;
  n_bc_ = static_cast<int>(grid_.B.rows());
  n_c_ = bodies_.n_constraints();
  n_l6_ = 2 * (config_.coupling_mode == CouplingMode::node_collocation ? bodies_.n_nodes()
                                                                       : bodies_.n_segments());
  o_q_ = n_f_;
  o_vr_ = o_q_ + n_q_;
  o_p_ = o_vr_ + n_q_;
  o_l3_ = o_p_ + n_p_;
  o_l5_ = o_l3_ + n_bc_;
  o_l6_ = o_l5_ + n_c_;
  n_total_ = o_l6_ + n_l6_;

  mr_ = body_mass_diagonal(bodies_);
  f_ext_ = body_external_force(bodies_, grid_.props.g);
  mf_gravity_.resize(n_f_);
  for (int k = 0; k < grid_.n_u; ++k) mf_gravity_[k] = grid_.mf[k] * grid_.props.g[0];
  for (int k = grid_.n_u; k < n_f_; ++k) mf_gravity_[k] = grid_.mf[k] * grid_.props.g[1];

  g_op_ = grid_.G;
  d_op_ = grid_.D;
  if (gauge_) {
    std::vector<Trip> tg, td;
    for (int k = 0; k < g_op_.outerSize(); ++k)
      for (SpMat::InnerIterator it(g_op_, k); it; ++it)
        if (it.col() != 0) tg.emplace_back(static_cast<int>(it.row()),
                                           static_cast<int>(it.col()), it.value());
    for (int k = 0; k < d_op_.outerSize(); ++k)
      for (SpMat::InnerIterator it(d_op_, k); it; ++it)
        if (it.row() != 0) td.emplace_back(static_cast<int>(it.row()),
                                           static_cast<int>(it.col()), it.value());
    g_op_.setZero();
    g_op_.setFromTriplets(tg.begin(), tg.end());
    d_op_.setZero();
    d_op_.setFromTriplets(td.begin(), td.end());
  }

  const double h = config_.h;
  for (int k = 0; k < n_f_; ++k) const_trips_.emplace_back(k, k, grid_.mf[k]);
  append_block(const_trips_, grid_.L, 0, 0, -0.5 * h * grid_.props.mu);
  append_block(const_trips_, g_op_, 0, o_p_);
  const SpMat bt = grid_.B.transpose();
  append_block(const_trips_, bt, 0, o_l3_);
  for (int k = 0; k < n_q_; ++k) {
    const_trips_.emplace_back(o_q_ + k, o_q_ + k, 1.0);
    const_trips_.emplace_back(o_q_ + k, o_vr_ + k, -0.5 * h);
    const_trips_.emplace_back(o_vr_ + k, o_vr_ + k, mr_[k]);
  }
  append_block(const_trips_, d_op_, o_p_, 0);
  if (gauge_) const_trips_.emplace_back(o_p_, o_p_, 1.0);
  append_block(const_trips_, grid_.B, o_l3_, 0);
  if (config_.dual_regularization > 0.0)
    for (int k = 0; k < n_l6_; ++k)
      const_trips_.emplace_back(o_l6_ + k, o_l6_ + k, config_.dual_regularization);
}

SideVelocities ImplicitStepper::side_velocities(double t) const {
  return bc_ ? bc_(t) : grid_.base_side_velocities();
}

SimState ImplicitStepper::make_state(double t, const Vec& vf, const Vec& q,
                                     const Vec& vr) const {
  check_vec(vf, n_f_, "make_state: fluid velocity");
  check_vec(q, n_q_, "make_state: body pose");
  check_vec(vr, n_q_, "make_state: body velocity");
  SimState s;
  s.t = t;
  s.vf = vf;
  s.q = q;
  s.vr = vr;
  s.duals.p = Vec::Zero(n_p_);
  s.duals.l3 = Vec::Zero(n_bc_);
  s.duals.l5 = Vec::Zero(n_c_);
  s.duals.l6 = Vec::Zero(n_l6_);
  return s;
}

SimState ImplicitStepper::rest_state(const Vec& q0) const {
  const Vec q = q0.size() > 0 ? q0 : Vec(Vec::Zero(n_q_));
  return make_state(0.0, Vec::Zero(n_f_), q, Vec::Zero(n_q_));
}

Vec ImplicitStepper::pack(const SimState& s) const {
  check_vec(s.vf, n_f_, "pack: fluid velocity");
  check_vec(s.q, n_q_, "pack: body pose");
  check_vec(s.vr, n_q_, "pack: body velocity");
  check_vec(s.duals.p, n_p_, "pack: pressure dual");
  check_vec(s.duals.l3, n_bc_, "pack: boundary dual");
  check_vec(s.duals.l5, n_c_, "pack: joint dual");
  check_vec(s.duals.l6, n_l6_, "pack: no-slip dual");
  Vec x(n_total_);
  x.segment(0, n_f_) = s.vf;
  x.segment(o_q_, n_q_) = s.q;
  x.segment(o_vr_, n_q_) = s.vr;
  x.segment(o_p_, n_p_) = s.duals.p;
  x.segment(o_l3_, n_bc_) = s.duals.l3;
  x.segment(o_l5_, n_c_) = s.duals.l5;
  x.segment(o_l6_, n_l6_) = s.duals.l6;
  return x;
}

SimState ImplicitStepper::unpack(const Vec& x, double t) const {
  check_vec(x, n_total_, "unpack");
  SimState s;
  s.t = t;
  s.vf = x.segment(0, n_f_);
  s.q = x.segment(o_q_, n_q_);
  s.vr = x.segment(o_vr_, n_q_);
  s.duals.p = x.segment(o_p_, n_p_);
  s.duals.l3 = x.segment(o_l3_, n_bc_);
  s.duals.l5 = x.segment(o_l5_, n_c_);
  s.duals.l6 = x.segment(o_l6_, n_l6_);
  return s;
}

void ImplicitStepper::assemble(const SimState& prev, const Vec& x, Vec* r, SpMat* jac) const {
  check_vec(x, n_total_, "assemble");
  const double h = config_.h;
  const double t_next = prev.t + h;
  const SideVelocities sv = side_velocities(t_next);

  const Vec vf1 = x.segment(0, n_f_);
  const Vec q1 = x.segment(o_q_, n_q_);
  const Vec vr1 = x.segment(o_vr_, n_q_);
  const Vec p = x.segment(o_p_, n_p_);
  const Vec l3 = x.segment(o_l3_, n_bc_);
  const Vec l5 = x.segment(o_l5_, n_c_);
  const Vec l6 = x.segment(o_l6_, n_l6_);
  const Vec ve = 0.5 * (prev.vf + vf1);

  const Coupling cpl =
      build_coupling(grid_, bodies_, q1, config_.coupling_mode, config_.quad_order);
  const SpMat c5 = constraint_jacobian(bodies_, q1);

  if (r) {
    r->resize(n_total_);
    Vec force = grid_.props.mu * (grid_.L * ve + laplacian_bc(grid_, sv)) + mf_gravity_;
    if (config_.include_convection) force -= grid_.props.rho * convective(grid_, ve, sv);
    Vec r_vf = grid_.mf.cwiseProduct(vf1 - prev.vf) + g_op_ * p - h * force;
    if (n_bc_ > 0) r_vf += grid_.B.transpose() * l3;
    if (n_l6_ > 0) r_vf += cpl.E.transpose() * l6;
    r->segment(0, n_f_) = r_vf;

    r->segment(o_q_, n_q_) = q1 - prev.q - 0.5 * h * (prev.vr + vr1);
    Vec r_vr = mr_.cwiseProduct(vr1 - prev.vr) - h * f_ext_;
    if (n_c_ > 0) r_vr -= c5.transpose() * l5;
    if (n_l6_ > 0) r_vr -= cpl.J.transpose() * l6;
    r->segment(o_vr_, n_q_) = r_vr;

    Vec r_p = d_op_ * vf1;
    if (gauge_) r_p[0] = p[0];
    r->segment(o_p_, n_p_) = r_p;

    if (n_bc_ > 0) r->segment(o_l3_, n_bc_) = grid_.B * vf1 - boundary_values(grid_, sv);
    if (n_c_ > 0) r->segment(o_l5_, n_c_) = constraint_eval(bodies_, q1, t_next);
    if (n_l6_ > 0) {
      Vec r6 = cpl.E * vf1 - cpl.J * vr1;
      if (config_.dual_regularization > 0.0) r6 += config_.dual_regularization * l6;
      r->segment(o_l6_, n_l6_) = r6;
    }
  }

  if (jac) {
    std::vector<Trip> t = const_trips_;
    if (config_.include_convection)
      append_block(t, convective_jacobian(grid_, ve, sv), 0, 0, 0.5 * h * grid_.props.rho);
    if (n_c_ > 0) {
      const SpMat c5t = c5.transpose();
      append_block(t, c5t, o_vr_, o_l5_, -1.0);
      append_block(t, constraint_force_pose_jacobian(bodies_, q1, l5), o_vr_, o_q_, -1.0);
      append_block(t, c5, o_l5_, o_q_);
    }
    if (n_l6_ > 0) {
      append_block(t, interp_dual_pose_jacobian(grid_, cpl, l6), 0, o_q_);
      const SpMat et = cpl.E.transpose();
      append_block(t, et, 0, o_l6_);
      const SpMat jt = cpl.J.transpose();
      append_block(t, jt, o_vr_, o_l6_, -1.0);
      append_block(t, body_map_dual_pose_jacobian(cpl, l6), o_vr_, o_q_, -1.0);
      append_block(t, cpl.E, o_l6_, 0);
      append_block(t, interp_pose_jacobian(grid_, cpl, vf1), o_l6_, o_q_);
      append_block(t, body_map_pose_jacobian(cpl, vr1), o_l6_, o_q_, -1.0);
      append_block(t, cpl.J, o_l6_, o_vr_, -1.0);
    }
    jac->resize(n_total_, n_total_);
    jac->setFromTriplets(t.begin(), t.end());
    jac->makeCompressed();
  }
}

Vec ImplicitStepper::residual(const SimState& prev, const Vec& x) const {
  Vec r;
  assemble(prev, x, &r, nullptr);
  return r;
}

SpMat ImplicitStepper::jacobian(const SimState& prev, const Vec& x) const {
  SpMat j;
  assemble(prev, x, nullptr, &j);
  return j;
}

void ImplicitStepper::throw_singular(const Vec& q) const {
  std::string msg = "KKT factorization is singular";
  if (config_.coupling_mode == CouplingMode::node_collocation && bodies_.n_nodes() > 1) {
    const auto nodes = world_nodes(bodies_, q);
    const double tol = 1e-9 * std::min(grid_.config.dx, grid_.config.dy);
    for (size_t i = 0; i < nodes.size(); ++i)
      for (size_t j = i + 1; j < nodes.size(); ++j)
        if ((nodes[i] - nodes[j]).norm() <= tol)
          throw SingularMatrixError(
              msg +
              " in the no-slip constraint block: coincident boundary nodes produce "
              "duplicate collocation rows; the segment-integral coupling handles shared "
              "nodes");
  }
  double min_len = std::numeric_limits<double>::infinity();
  for (const BoundaryMesh& mesh : bodies_.meshes)
    for (const auto& seg : mesh.segments)
      min_len = std::min(min_len, (mesh.nodes[seg[1]] - mesh.nodes[seg[0]]).norm());
  const double spacing = std::min(grid_.config.dx, grid_.config.dy);
  if (min_len < 0.5 * spacing)
    throw SingularMatrixError(
        msg + ": the boundary mesh (segment length " + std::to_string(min_len) +
        ") is much finer than the grid (spacing " + std::to_string(spacing) +
        "), so nearby interpolation rows are nearly identical; refine the grid or "
        "coarsen the mesh");
  throw SingularMatrixError(
      msg + "; check for redundant joint constraints or a disabled pressure gauge");
}

StepSolution ImplicitStepper::step(const SimState& prev) const {
  // Without an outflow side the constant pressure vector lies exactly in
  // the KKT null space; refuse to solve rather than depend on how a given
  // factorization backend happens to treat the deficiency.
  if (!config_.pressure_gauge && !grid_.has_outflow)
    throw SingularMatrixError(
        "KKT system is singular: the pressure gauge is disabled on a domain without "
        "outflow, so pressure is only determined up to a constant");

  Vec x = pack(prev);
  Vec r;
  assemble(prev, x, &r, nullptr);
  double rn = r.lpNorm<Eigen::Infinity>();

  int iters = 0;
  SpMat jac;
  KktSolver solver;
  while (!(rn <= config_.newton_tol)) {
    if (iters >= config_.max_newton_iters)
      throw NonconvergenceError("newton stalled at residual " + std::to_string(rn) +
                                    " after " + std::to_string(iters) + " iterations",
                                rn);
    assemble(prev, x, nullptr, &jac);
    solver.compute(jac);
    if (solver.info() != Eigen::Success) throw_singular(Vec(x.segment(o_q_, n_q_)));
    const Vec neg_r = -r;
    const Vec dx = solver.solve(neg_r);
    if (solver.info() != Eigen::Success || !dx.allFinite())
      throw_singular(Vec(x.segment(o_q_, n_q_)));
    // a numerically singular factorization can still return a "solution";
    // verify it actually solves the linear system
    const double lin_res = (jac * dx + r).lpNorm<Eigen::Infinity>();
    if (!(lin_res <= 1e-6 * std::max(1.0, rn))) throw_singular(Vec(x.segment(o_q_, n_q_)));

    // Damped step acceptance uses the affine-invariant criterion: the trial
    // must shrink the Newton correction measured with the current
    // factorization. The raw residual norm can rise by orders of magnitude
    // on the convergent path (impulsive constraint activation), so it is
    // only consulted for outright convergence.
    const double dn = dx.lpNorm<Eigen::Infinity>();
    double alpha = 1.0;
    bool accepted = false, any_feasible = false;
    for (int bt = 0; bt <= 8 && !accepted; ++bt, alpha *= 0.5) {
      const Vec xt = x + alpha * dx;
      Vec rt;
      try {
        assemble(prev, xt, &rt, nullptr);
      } catch (const GeometryError&) {
        continue;  // trial pose left the coupling margin; shorten the step
      }
      if (!rt.allFinite()) continue;
      any_feasible = true;
      const double rtn = rt.lpNorm<Eigen::Infinity>();
      if (rtn <= config_.newton_tol) {
        x = xt;
        r.swap(rt);
        rn = rtn;
        accepted = true;
        break;
      }
      const Vec neg_rt = -rt;
      const Vec dt = solver.solve(neg_rt);
      if (solver.info() != Eigen::Success || !dt.allFinite()) continue;
      if (dt.lpNorm<Eigen::Infinity>() < dn) {
        x = xt;
        r.swap(rt);
        rn = rtn;
        accepted = true;
      }
    }
    if (!accepted) {
      if (!any_feasible)
        throw NonconvergenceError(
            "newton step left the feasible region (residual " + std::to_string(rn) + ")",
            rn);
      throw NonconvergenceError("newton stalled at residual " + std::to_string(rn) +
                                    " after " + std::to_string(iters) + " iterations",
                                rn);
    }
    ++iters;
  }

  StepSolution sol;
  sol.state = unpack(x, prev.t + config_.h);
  sol.newton_iters = iters;
  sol.residual_norm = rn;
  return sol;
}

double ImplicitStepper::kinetic_energy(const SimState& s) const {
  double e = 0.5 * s.vf.dot(grid_.mf.cwiseProduct(s.vf));
  if (n_q_ > 0) e += 0.5 * s.vr.dot(mr_.cwiseProduct(s.vr));
  return e;
}

double ImplicitStepper::divergence_norm(const SimState& s) const {
  return (grid_.D * s.vf).lpNorm<Eigen::Infinity>();
}

Vec ImplicitStepper::body_forces(const SimState& s) const {
  if (n_l6_ == 0) return Vec::Zero(n_q_);
  const Coupling cpl =
      build_coupling(grid_, bodies_, s.q, config_.coupling_mode, config_.quad_order);
  return body_force_from_duals(cpl, s.duals.l6, config_.h);
}

SimState simulate(const ImplicitStepper& stepper, SimState state, int n_steps,
                  const StepSink& sink, const StopCondition& stop) {
  if (n_steps < 1) throw ConfigValidationError("simulate: n_steps must be at least 1");
  for (int k = 0; k < n_steps; ++k) {
    SimState prev = state;
    StepSolution sol;
    try {
      sol = stepper.step(prev);
    } catch (const NonconvergenceError& e) {
      throw NonconvergenceError("step " + std::to_string(k + 1) + ": " + e.what(),
                                e.last_residual);
    } catch (const SingularMatrixError& e) {
      throw SingularMatrixError("step " + std::to_string(k + 1) + ": " + e.what());
    } catch (const GeometryError& e) {
      throw GeometryError("step " + std::to_string(k + 1) + ": " + e.what());
    }
    state = std::move(sol.state);
    if (sink) {
      StepRecord rec;
      rec.step = k + 1;
      rec.t = state.t;
      rec.energy = stepper.kinetic_energy(state);
      rec.divergence_norm = stepper.divergence_norm(state);
      rec.newton_iters = sol.newton_iters;
      rec.residual_norm = sol.residual_norm;
      rec.body_force = stepper.body_forces(state);
      sink(rec, state);
    }
    if (stop && stop(prev, state)) break;
  }
  return state;
}

}  // namespace vfsim
