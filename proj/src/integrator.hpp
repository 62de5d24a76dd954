/// @file integrator.hpp
/// The coupled implicit midpoint step.
///
/// One step advances fluid faces, body poses/velocities and all constraint
/// duals together by solving a single nonlinear KKT system with Newton's
/// method. States live at midpoints spaced h apart; viscous and convective
/// forces are evaluated at the average of the two midpoint velocities, which
/// keeps the scheme time reversible and conserves quadratic invariants of
/// the inviscid periodic problem.
///
/// Unknown layout within a step (sizes in parentheses):
///
///   [ v^f (n_f) | q^r (n_q) | v^r (n_q) | p (n_p) |
///     lam3 (boundary rows) | lam5 (joint rows) | lam6 (no-slip rows) ]
///
/// All duals are impulses accumulated over the step; constraint force =
/// Jacobian^T * lam / h. The pressure dual p here carries pressure*time
/// and enters the momentum residual as +G p (physical pressure = -p/h).
/// On domains without outflow pressure is only defined up to a constant
/// and one divergence row is redundant, so the first cell's divergence row
/// is replaced by the gauge p[0] = 0 and the matching gradient column is
/// dropped, which keeps the system symmetric; a dense mean-zero row would
/// ruin the sparsity of the factorization.
#pragma once

#include <functional>

#include "convective.hpp"
#include "coupling.hpp"

namespace vfsim {

struct IntegratorConfig {
  double h = 0.01;
  double newton_tol = 1e-8;
  int max_newton_iters = 50;
  double dual_regularization = 0.0;  // epsilon on the lam6 block
  bool pressure_gauge = true;        // pin one pressure cell on gauge domains
  bool include_convection = true;    // disable for the Stokes limit
  CouplingMode coupling_mode = CouplingMode::segment_integral;
  int quad_order = 3;
};

struct DualState {
  Vec p;   // incompressibility (impulse pressure)
  Vec l3;  // domain boundary velocities
  Vec l5;  // joints and actuation
  Vec l6;  // no-slip coupling
};

/// One midpoint state. Duals are carried along as warm starts and as the
/// step's force readout.
struct SimState {
  double t = 0.0;
  Vec vf;
  Vec q;
  Vec vr;
  DualState duals;
};

struct StepSolution {
  SimState state;
  int newton_iters = 0;
  double residual_norm = 0.0;
};

/// Time-dependent prescribed side velocities (inflow values, moving walls,
/// perturbation triggers). Defaults to the constant grid values.
using BcSchedule = std::function<SideVelocities(double)>;

class ImplicitStepper {
 public:
  ImplicitStepper(FluidGrid grid, BodySystem bodies, const IntegratorConfig& config);

  const FluidGrid& grid() const { return grid_; }
  const BodySystem& bodies() const { return bodies_; }
  const IntegratorConfig& config() const { return config_; }

  int n_unknowns() const { return n_total_; }
  bool gauge_active() const { return gauge_; }
  int no_slip_rows() const { return n_l6_; }

  void set_bc_schedule(BcSchedule schedule) { bc_ = std::move(schedule); }
  SideVelocities side_velocities(double t) const;

  /// A state at rest (t = 0, zero velocities, zero duals) at body pose q0.
  SimState rest_state(const Vec& q0 = Vec()) const;
  /// Validates sizes and attaches zero duals.
  SimState make_state(double t, const Vec& vf, const Vec& q, const Vec& vr) const;

  Vec pack(const SimState& s) const;
  SimState unpack(const Vec& x, double t) const;

  /// Stacked residual of the step equations at unknowns x, stepping from
  /// `prev` to time t_next = prev.t + h.
  Vec residual(const SimState& prev, const Vec& x) const;
  /// Analytic Jacobian of `residual` in x.
  SpMat jacobian(const SimState& prev, const Vec& x) const;

  /// Damped Newton solve of one step. Throws NonconvergenceError after
  /// max_newton_iters, SingularMatrixError when the KKT factorization
  /// breaks down.
  StepSolution step(const SimState& prev) const;

  double kinetic_energy(const SimState& s) const;
  /// ||G^T v^f||_inf, the volume-integrated divergence residual.
  double divergence_norm(const SimState& s) const;
  /// Fluid force and torque on each body, J(q)^T lam6 / h.
  Vec body_forces(const SimState& s) const;

 private:
  void assemble(const SimState& prev, const Vec& x, Vec* r, SpMat* jac) const;
  [[noreturn]] void throw_singular(const Vec& q) const;

  FluidGrid grid_;
  BodySystem bodies_;
  IntegratorConfig config_;
  BcSchedule bc_;

  bool gauge_ = false;
  int n_f_ = 0, n_q_ = 0, n_p_ = 0, n_bc_ = 0, n_c_ = 0, n_l6_ = 0;
  int o_q_ = 0, o_vr_ = 0, o_p_ = 0, o_l3_ = 0, o_l5_ = 0, o_l6_ = 0, n_total_ = 0;

  Vec mr_;          // body mass diagonal
  Vec f_ext_;       // gravity/buoyancy wrench on bodies
  Vec mf_gravity_;  // volume-integrated gravity on fluid faces
  SpMat g_op_, d_op_;              // gradient/divergence, gauge column/row removed
  std::vector<Trip> const_trips_;  // state-independent Jacobian entries
};

/// Per-step diagnostics handed to sinks: flat numbers plus the per-body
/// generalized force (3 entries per body).
struct StepRecord {
  int step = 0;
  double t = 0.0;
  double energy = 0.0;
  double divergence_norm = 0.0;
  int newton_iters = 0;
  double residual_norm = 0.0;
  Vec body_force;
};

using StepSink = std::function<void(const StepRecord&, const SimState&)>;
using StopCondition = std::function<bool(const SimState& prev, const SimState& next)>;

/// Advances `state` by up to n_steps (>= 1), invoking `sink` after every
/// step and stopping early when `stop` returns true. Solver errors are
/// rethrown with the failing step index prefixed.
SimState simulate(const ImplicitStepper& stepper, SimState state, int n_steps,
                  const StepSink& sink = {}, const StopCondition& stop = {});

}  // namespace vfsim
