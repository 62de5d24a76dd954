// File: scenarios.cpp -- benchmark scenario construction and diagnostics.
#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vfsim {

namespace {

int step_count(double duration, double h) {
  if (!(h > 0.0))
    throw ConfigValidationError("scenario: step size must be positive, got " +
                                std::to_string(h));
  if (!(duration > 0.0))
    throw ConfigValidationError("scenario: duration must be positive, got " +
                                std::to_string(duration));
  return std::max(1, static_cast<int>(std::lround(duration / h)));
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0))
    throw ConfigValidationError(std::string("scenario: ") + what + " must be positive, got " +
                                std::to_string(v));
}

double mean_of(const std::vector<double>& v, int begin) {
  double s = 0.0;
  for (size_t k = begin; k < v.size(); ++k) s += v[k];
  return s / static_cast<double>(v.size() - begin);
}

}  // namespace

BoundaryMesh circle_mesh(double radius, int segments) {
  require_positive(radius, "circle radius");
  if (segments < 3)
    throw ConfigValidationError("scenario: a circle mesh needs at least 3 segments");
  BoundaryMesh m;
  for (int k = 0; k < segments; ++k) {
    const double a = 2.0 * M_PI * k / segments;
    m.nodes.push_back(radius * Vec2(std::cos(a), std::sin(a)));
  }
  for (int k = 0; k < segments; ++k) m.segments.push_back({k, (k + 1) % segments});
  return m;
}

BoundaryMesh rectangle_mesh(double length, double width, double max_segment) {
  require_positive(length, "rectangle length");
  require_positive(width, "rectangle width");
  require_positive(max_segment, "mesh segment length");
  const std::array<Vec2, 4> corners = {Vec2(-0.5 * length, -0.5 * width),
                                       Vec2(0.5 * length, -0.5 * width),
                                       Vec2(0.5 * length, 0.5 * width),
                                       Vec2(-0.5 * length, 0.5 * width)};
  BoundaryMesh m;
  for (int e = 0; e < 4; ++e) {
    const Vec2 a = corners[e], b = corners[(e + 1) % 4];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a).norm() / max_segment)));
    for (int k = 0; k < pieces; ++k)
      m.nodes.push_back(a + (static_cast<double>(k) / pieces) * (b - a));
  }
  const int n = static_cast<int>(m.nodes.size());
  for (int k = 0; k < n; ++k) m.segments.push_back({k, (k + 1) % n});
  return m;
}

BoundaryMesh plate_mesh(double length, double max_segment) {
  require_positive(length, "plate length");
  require_positive(max_segment, "mesh segment length");
  const int pieces = std::max(1, static_cast<int>(std::ceil(length / max_segment)));
  BoundaryMesh m;
  for (int k = 0; k <= pieces; ++k)
    m.nodes.push_back(Vec2(-0.5 * length + length * k / pieces, 0.0));
  for (int k = 0; k < pieces; ++k) m.segments.push_back({k, k + 1});
  return m;
}

ScenarioSetup build_poiseuille(const ScenarioSpec& spec, const IntegratorConfig& integ) {
  const PoiseuilleParams& p = spec.poiseuille;
  if (p.cells < 2)
    throw ConfigValidationError("poiseuille: need at least 2 cells across the channel");
  require_positive(p.height, "channel height");
  require_positive(spec.props.rho, "density");
  require_positive(spec.props.mu, "viscosity");

  GridConfig gc;
  gc.ny = p.cells;
  gc.nx = 4;  // the flow is x-invariant; a short periodic strip suffices
  gc.dy = p.height / p.cells;
  gc.dx = gc.dy;
  gc.bc[side_left].kind = gc.bc[side_right].kind = BcKind::periodic;
  gc.bc[side_bottom].kind = gc.bc[side_top].kind = BcKind::wall;

  FluidProperties props = spec.props;
  props.g = Vec2(p.drive / props.rho, 0.0);  // body force equivalent to the gradient

  ScenarioSetup setup;
  setup.kind = ScenarioKind::poiseuille;
  setup.grid = build_grid(gc, props);
  setup.vf0 = Vec::Zero(setup.grid.n_f);
  setup.q0 = Vec();
  setup.n_steps = step_count(spec.duration > 0.0 ? spec.duration : 60.0, integ.h);
  setup.output_every = spec.output_every;
  setup.u_ref = p.drive * p.height * p.height / (8.0 * props.mu);  // centerline speed
  setup.length_ref = p.height;
  return setup;
}

ScenarioSetup build_disc(const ScenarioSpec& spec, const IntegratorConfig& integ) {
  const DiscParams& d = spec.disc;
  require_positive(d.diameter, "disc diameter");
  require_positive(d.reynolds, "reynolds number");
  require_positive(d.domain_diameters, "domain size");
  require_positive(spec.props.rho, "density");
  if (d.u_infty < 0.0)
    throw ConfigValidationError("disc: free-stream velocity must be non-negative");
  if (d.resolution < 16)
    throw ConfigValidationError("disc: grid resolution must be at least 16");

  FluidProperties props = spec.props;
  if (d.u_infty > 0.0) {
    const double mu = props.rho * d.u_infty * d.diameter / d.reynolds;
    if (props.mu > 0.0 && std::abs(props.mu - mu) > 1e-9 * mu)
      throw ConfigValidationError(
          "disc: viscosity " + std::to_string(props.mu) +
          " is inconsistent with Re = rho*u_infty*diameter/mu; Re = " +
          std::to_string(d.reynolds) + " requires mu = " + std::to_string(mu));
    props.mu = mu;
  } else {
    require_positive(props.mu, "viscosity (free stream at rest)");
  }
  props.g = Vec2::Zero();

  const double extent = d.domain_diameters * d.diameter;
  GridConfig gc;
  gc.nx = gc.ny = d.resolution;
  gc.dx = gc.dy = extent / d.resolution;
  gc.bc[side_left] = {BcKind::inflow, Vec2(d.u_infty, 0.0)};
  gc.bc[side_right].kind = BcKind::outflow;
  gc.bc[side_bottom] = {BcKind::inflow, Vec2(d.u_infty, 0.0)};  // far-field, flow-parallel
  gc.bc[side_top] = {BcKind::inflow, Vec2(d.u_infty, 0.0)};

  const Vec2 center = d.center_diameters * d.diameter;
  const double radius = 0.5 * d.diameter;
  const double clearance = 2.0 * 1.5 * std::max(gc.dx, gc.dy);  // two kernel supports
  const std::array<double, 4> gap = {center[0] - radius, extent - center[0] - radius,
                                     center[1] - radius, extent - center[1] - radius};
  static const char* side_names[4] = {"left", "right", "bottom", "top"};
  for (int s = 0; s < 4; ++s)
    if (gap[s] < clearance)
      throw GeometryError("disc: gap of " + std::to_string(gap[s]) + " to the " +
                          side_names[s] + " boundary is less than two kernel supports (" +
                          std::to_string(clearance) + ")");

  BodySystem sys;
  RigidBody2D disc;
  disc.mass = props.rho * M_PI * radius * radius;
  disc.inertia = 0.5 * disc.mass * radius * radius;
  sys.bodies.push_back(disc);
  const int segments =
      std::max(12, static_cast<int>(std::lround(M_PI * d.diameter / gc.dx)));
  sys.meshes.push_back(circle_mesh(radius, segments));
  sys.constraints.push_back(ConstraintSpec::fixed(0, center, 0.0));

  ScenarioSetup setup;
  setup.kind = ScenarioKind::disc;
  setup.grid = build_grid(gc, props);
  setup.bodies = std::move(sys);
  setup.vf0 = Vec::Zero(setup.grid.n_f);
  setup.vf0.head(setup.grid.n_u).setConstant(d.u_infty);  // impulsive start
  setup.q0 = Vec(3);
  setup.q0 << center[0], center[1], 0.0;
  setup.n_steps = step_count(spec.duration > 0.0 ? spec.duration : 60.0, integ.h);
  setup.output_every = spec.output_every;
  setup.u_ref = d.u_infty;
  setup.length_ref = d.diameter;

  if (d.shedding_trigger) {
    const double t_end = d.trigger_steps * integ.h;
    const double vy = d.trigger_amplitude * d.u_infty;
    const SideVelocities base = setup.grid.base_side_velocities();
    setup.bc = [base, t_end, vy](double t) {
      SideVelocities sv = base;
      if (t <= t_end)
        for (int s : {side_left, side_bottom, side_top}) sv[s][1] += vy;
      return sv;
    };
  }
  return setup;
}

ScenarioSetup build_swimmer(const ScenarioSpec& spec, const IntegratorConfig& integ) {
  const SwimmerParams& w = spec.swimmer;
  require_positive(w.domain, "domain size");
  require_positive(w.body_length, "body length");
  require_positive(w.body_width, "body width");
  require_positive(w.fin_length, "fin length");
  require_positive(w.density_ratio, "density ratio");
  require_positive(w.gait_frequency, "gait frequency");
  require_positive(spec.props.rho, "density");
  require_positive(spec.props.mu, "viscosity");
  if (w.resolution < 16)
    throw ConfigValidationError("swimmer: grid resolution must be at least 16");
  if (w.gait_amplitude < 0.0)
    throw ConfigValidationError("swimmer: gait amplitude must be non-negative");
  if (w.cycles < 1) throw ConfigValidationError("swimmer: need at least one gait cycle");

  GridConfig gc;
  gc.nx = gc.ny = w.resolution;
  gc.dx = gc.dy = w.domain / w.resolution;
  // all four sides keep the default wall kind: still water in a tank

  FluidProperties props = spec.props;
  props.g = Vec2::Zero();  // neutral buoyancy: no net gravity on anything

  const Vec2 center(0.5 * w.domain, 0.5 * w.domain);
  const std::array<Vec2, 2> hinge_local = {Vec2(-0.5 * w.body_length, 0.5 * w.body_width),
                                           Vec2(-0.5 * w.body_length, -0.5 * w.body_width)};

  // conservative gait envelope: anywhere on a circle of one fin length
  // around each hinge, kept two kernel supports away from every wall
  const double clearance = 2.0 * 1.5 * std::max(gc.dx, gc.dy);
  for (const Vec2& hl : hinge_local) {
    const Vec2 hinge = center + hl;
    const double reach = w.fin_length;
    if (hinge[0] - reach < clearance || hinge[0] + reach > w.domain - clearance ||
        hinge[1] - reach < clearance || hinge[1] + reach > w.domain - clearance)
      throw GeometryError(
          "swimmer: the fin gait sweep comes within two kernel supports of a wall; "
          "shrink the body or enlarge the domain");
  }
  const double body_reach =
      0.5 * std::hypot(w.body_length, w.body_width) + std::max(gc.dx, gc.dy);
  if (center[0] - body_reach < clearance || center[0] + body_reach > w.domain - clearance)
    throw GeometryError("swimmer: the body does not fit the domain with wall clearance");

  // worst-case tip closure of the scissor gait: both fins deflected toward
  // the axis by the full amplitude; tips closer than half a grid spacing
  // are indistinguishable to the grid and the coupled system degenerates
  const double closure =
      2.0 * w.fin_length * std::sin(std::min(w.gait_amplitude, 0.5 * M_PI));
  if (w.body_width - closure < 0.5 * std::max(gc.dx, gc.dy))
    throw GeometryError(
        "swimmer: the fin tips close to within half a grid spacing of each other "
        "at full deflection; reduce the gait amplitude, widen the body, shorten "
        "the fins, or refine the grid");

  BodySystem sys;
  RigidBody2D body;
  body.mass = props.rho * w.density_ratio * w.body_length * w.body_width;
  body.inertia =
      body.mass * (w.body_length * w.body_length + w.body_width * w.body_width) / 12.0;
  body.buoyancy_mass = props.rho * w.body_length * w.body_width;
  sys.bodies.push_back(body);
  sys.meshes.push_back(rectangle_mesh(w.body_length, w.body_width, gc.dx));

  const double fin_thickness = 0.25 * w.body_width;  // effective, for mass only
  RigidBody2D fin;
  fin.mass = props.rho * w.density_ratio * w.fin_length * fin_thickness;
  fin.inertia = fin.mass * w.fin_length * w.fin_length / 12.0;
  fin.buoyancy_mass = props.rho * w.fin_length * fin_thickness;

  const double amp = w.gait_amplitude;
  const double omega = 2.0 * M_PI * w.gait_frequency;
  const double lag = w.gait_phase_lag;
  // Startup envelope: deflection and deflection rate vanish at t = 0 so the
  // prescribed motion is consistent with the initial rest state.
  const double ramp_time = 0.5 / w.gait_frequency;
  auto env = [ramp_time](double t) {
    if (t <= 0.0) return 0.0;
    if (t >= ramp_time) return 1.0;
    const double x = t / ramp_time;
    return x * x * x * (10.0 + x * (6.0 * x - 15.0));
  };
  // fin angles relative to the body; pi points the fins straight back.
  // The mirrored gait swaps the fins' roles and flips their deflections,
  // i.e. reflects the whole motion across the body axis.
  std::array<Schedule, 2> gait;
  if (!w.mirrored) {
    gait[0] = [amp, omega, env](double t) { return M_PI + env(t) * amp * std::sin(omega * t); };
    gait[1] = [amp, omega, lag, env](double t) {
      return M_PI - env(t) * amp * std::sin(omega * t + lag);
    };
  } else {
    gait[0] = [amp, omega, lag, env](double t) {
      return M_PI + env(t) * amp * std::sin(omega * t + lag);
    };
    gait[1] = [amp, omega, env](double t) { return M_PI - env(t) * amp * std::sin(omega * t); };
  }

  Vec q0(9);
  q0.segment(0, 3) << center[0], center[1], 0.0;
  for (int f = 0; f < 2; ++f) {
    sys.bodies.push_back(fin);
    sys.meshes.push_back(plate_mesh(w.fin_length, gc.dx));
    const int fin_index = 1 + f;
    sys.constraints.push_back(ConstraintSpec::revolute(
        0, fin_index, hinge_local[f], Vec2(-0.5 * w.fin_length, 0.0)));
    sys.constraints.push_back(ConstraintSpec::prescribed_angle(fin_index, 0, gait[f]));

    const double theta0 = gait[f](0.0);
    const Vec2 hinge = center + hinge_local[f];
    const Vec2 com = hinge + rot(theta0) * Vec2(0.5 * w.fin_length, 0.0);
    q0.segment(3 * fin_index, 3) << com[0], com[1], theta0;
  }

  ScenarioSetup setup;
  setup.kind = ScenarioKind::swimmer;
  setup.grid = build_grid(gc, props);
  setup.bodies = std::move(sys);
  setup.vf0 = Vec::Zero(setup.grid.n_f);
  setup.q0 = std::move(q0);
  const double duration =
      spec.duration > 0.0 ? spec.duration : w.cycles / w.gait_frequency;
  setup.n_steps = step_count(duration, integ.h);
  setup.output_every = spec.output_every;
  setup.u_ref = amp * omega * w.fin_length;  // fin tip speed scale
  setup.length_ref = w.body_length;
  setup.forward = Vec2(1.0, 0.0);
  return setup;
}

ScenarioSetup build_scenario(const ScenarioSpec& spec, const IntegratorConfig& integ) {
  switch (spec.kind) {
    case ScenarioKind::poiseuille:
      return build_poiseuille(spec, integ);
    case ScenarioKind::disc:
      return build_disc(spec, integ);
    case ScenarioKind::swimmer:
      return build_swimmer(spec, integ);
  }
  throw ConfigValidationError("scenario: unknown kind");
}

Vec poiseuille_profile(const FluidGrid& grid, const Vec& vf) {
  if (vf.size() != grid.n_f)
    throw DimensionError("poiseuille_profile: velocity length " + std::to_string(vf.size()) +
                         " does not match the grid");
  const int cols = grid.u_cols();
  Vec profile = Vec::Zero(grid.config.ny);
  for (int j = 0; j < grid.config.ny; ++j) {
    for (int i = 0; i < cols; ++i) profile[j] += vf[grid.u_index(i, j)];
    profile[j] /= cols;
  }
  return profile;
}

Vec poiseuille_analytic(const FluidGrid& grid) {
  require_positive(grid.props.mu, "viscosity");
  const double drive = grid.props.rho * grid.props.g[0];
  const double height = grid.config.ny * grid.config.dy;
  Vec a(grid.config.ny);
  for (int j = 0; j < grid.config.ny; ++j) {
    const double y = (j + 0.5) * grid.config.dy;
    a[j] = 0.5 * drive / grid.props.mu * y * (height - y);
  }
  return a;
}

double poiseuille_error(const FluidGrid& grid, const Vec& vf_prev, const Vec& vf) {
  const double change = (vf - vf_prev).lpNorm<Eigen::Infinity>();
  const double scale = vf.lpNorm<Eigen::Infinity>();
  if (change > 1e-8 * scale)
    throw NonconvergenceError(
        "poiseuille: profile requested before the flow is steady (per-step change " +
            std::to_string(change) + " exceeds 1e-8 * " + std::to_string(scale) + ")",
        change);
  const Vec diff = poiseuille_profile(grid, vf) - poiseuille_analytic(grid);
  const double ref = poiseuille_analytic(grid).norm();
  return ref > 0.0 ? diff.norm() / ref : diff.norm();
}

AeroCoefficients aero_coefficients(const ForceHistory& history, double rho, double u_infty,
                                   double diameter) {
  require_positive(rho, "density");
  require_positive(u_infty, "free-stream velocity");
  require_positive(diameter, "diameter");
  if (!(history.dt > 0.0))
    throw ConfigValidationError("aero_coefficients: history needs a positive sample step");
  const int total = history.size();
  const int begin = static_cast<int>(std::floor(0.3 * total));  // transient cut
  const int n = total - begin;
  if (n < 16)
    throw ConfigValidationError("aero_coefficients: history too short after the 30% "
                                "transient cut (" +
                                std::to_string(n) + " samples)");

  const double coef = 1.0 / (0.5 * rho * u_infty * u_infty * diameter);
  AeroCoefficients out;
  out.cd = mean_of(history.fx, begin) * coef;

  double cl_min = history.fy[begin] * coef, cl_max = cl_min;
  for (int k = begin; k < total; ++k) {
    const double cl = history.fy[k] * coef;
    cl_min = std::min(cl_min, cl);
    cl_max = std::max(cl_max, cl);
  }
  out.cl_amplitude = 0.5 * (cl_max - cl_min);

  // naive DFT of the demeaned lift; fine for the few thousand samples here
  const double fy_mean = mean_of(history.fy, begin);
  std::vector<double> mag(n / 2);
  for (int k = 1; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (int m = 0; m < n; ++m) {
      const double phase = 2.0 * M_PI * k * m / n;
      const double y = history.fy[begin + m] - fy_mean;
      re += y * std::cos(phase);
      im -= y * std::sin(phase);
    }
    mag[k - 1] = std::hypot(re, im);
  }
  const auto peak = std::max_element(mag.begin(), mag.end());
  std::vector<double> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double noise = sorted[sorted.size() / 2];
  out.peak_ratio = *peak / std::max(noise, 1e-300);
  out.periodic = out.peak_ratio >= 10.0;
  if (out.periodic) {
    const int k_peak = static_cast<int>(peak - mag.begin()) + 1;
    const double freq = k_peak / (n * history.dt);
    out.strouhal = freq * diameter / u_infty;
  }
  return out;
}

}  // namespace vfsim
