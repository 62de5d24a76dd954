// File: runner.cpp
#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <utility>

namespace vfsim {
namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Deterministic text sink: every number goes through snprintf in the C
/// locale, so identical runs produce identical bytes.
class TextFile {
 public:
  TextFile(const std::filesystem::path& path) : path_(path.string()) {
    out_.open(path, std::ios::binary);
    if (!out_) throw IoError("run: cannot write \"" + path_ + "\"");
  }

  void line(const std::string& text) { out_ << text << '\n'; }

  void row(const std::vector<double>& values) {
    std::string text;
    for (size_t k = 0; k < values.size(); ++k) {
      if (k) text += ',';
      text += fmt(values[k]);
    }
    out_ << text << '\n';
  }

  void close() {
    out_.close();
    if (out_.fail()) throw IoError("run: failed while writing \"" + path_ + "\"");
  }

 private:
  std::string path_;
  std::ofstream out_;
};

Vec cell_velocity_u(const FluidGrid& grid, const Vec& vf) {
  const int nx = grid.config.nx, ny = grid.config.ny;
  Vec u(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      u[j * nx + i] = 0.5 * (vf[grid.u_index(i, j)] + vf[grid.u_index(i + 1, j)]);
  return u;
}

Vec cell_velocity_v(const FluidGrid& grid, const Vec& vf) {
  const int nx = grid.config.nx, ny = grid.config.ny;
  Vec v(nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      v[j * nx + i] = 0.5 * (vf[grid.v_index(i, j)] + vf[grid.v_index(i, j + 1)]);
  return v;
}

void write_vtk(const std::filesystem::path& path, const FluidGrid& grid, const SimState& s,
               double h, const std::string& digest) {
  TextFile out(path);
  const int nx = grid.config.nx, ny = grid.config.ny;
  char buf[160];

  out.line("# vtk DataFile Version 3.0");
  out.line("vfsim t=" + fmt(s.t) + " config " + digest +
           " units: velocity [length/time], pressure [force/length^2], vorticity [1/time]");
  out.line("ASCII");
  out.line("DATASET STRUCTURED_POINTS");
  std::snprintf(buf, sizeof buf, "DIMENSIONS %d %d 1", nx + 1, ny + 1);
  out.line(buf);
  out.line("ORIGIN " + fmt(grid.config.origin.x()) + " " + fmt(grid.config.origin.y()) + " 0");
  out.line("SPACING " + fmt(grid.config.dx) + " " + fmt(grid.config.dy) + " 1");

  const Vec w = vorticity(grid, s.vf);
  std::snprintf(buf, sizeof buf, "POINT_DATA %d", (nx + 1) * (ny + 1));
  out.line(buf);
  out.line("SCALARS vorticity double 1");
  out.line("LOOKUP_TABLE default");
  for (int k = 0; k < w.size(); ++k) out.line(fmt(w[k]));

  const Vec uc = cell_velocity_u(grid, s.vf);
  const Vec vc = cell_velocity_v(grid, s.vf);
  std::snprintf(buf, sizeof buf, "CELL_DATA %d", nx * ny);
  out.line(buf);
  out.line("VECTORS velocity double");
  for (int k = 0; k < uc.size(); ++k) out.line(fmt(uc[k]) + " " + fmt(vc[k]) + " 0");

  out.line("SCALARS pressure double 1");
  out.line("LOOKUP_TABLE default");
  const bool have_p = s.duals.p.size() == grid.n_p;
  for (int k = 0; k < grid.n_p; ++k) out.line(fmt(have_p ? -s.duals.p[k] / h : 0.0));
  out.close();
}

const char* kind_label(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::poiseuille: return "poiseuille";
    case ScenarioKind::disc: return "disc";
    case ScenarioKind::swimmer: return "swimmer";
  }
  return "?";
}

/// Rethrow an Error with a context prefix, preserving its category.
[[noreturn]] void rethrow_prefixed(const Error& e, const std::string& prefix) {
  const std::string msg = prefix + e.what();
  if (const auto* nc = dynamic_cast<const NonconvergenceError*>(&e))
    throw NonconvergenceError(msg, nc->last_residual);
  switch (e.category()) {
    case ErrorCategory::config_parse: throw ConfigParseError(msg);
    case ErrorCategory::config_validation: throw ConfigValidationError(msg);
    case ErrorCategory::dimension: throw DimensionError(msg);
    case ErrorCategory::geometry: throw GeometryError(msg);
    case ErrorCategory::schedule: throw ScheduleError(msg);
    case ErrorCategory::singular: throw SingularMatrixError(msg);
    case ErrorCategory::io: throw IoError(msg);
    case ErrorCategory::usage: throw UsageError(msg);
    case ErrorCategory::nonconvergence:
    case ErrorCategory::internal: break;
  }
  throw InternalError(msg);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

BenchRow make_row(const std::string& name, double value, double lo, double hi) {
  return {name, value, lo, hi, value >= lo && value <= hi};
}

}  // namespace

RunReport run(const RunConfig& config) {
  const ScenarioSetup setup = build_scenario(config.scenario, config.integrator);
  const std::string digest = config_digest(config);
  const int n_bodies = setup.bodies.n_bodies();

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec)
    throw IoError("run: cannot create output directory \"" + config.output_dir +
                  "\": " + ec.message());
  const std::filesystem::path dir(config.output_dir);

  ImplicitStepper stepper(setup.grid, setup.bodies, config.integrator);
  if (setup.bc) stepper.set_bc_schedule(setup.bc);
  SimState state = stepper.make_state(0.0, setup.vf0, setup.q0, Vec::Zero(setup.q0.size()));

  RunReport report;
  report.scenario = kind_label(setup.kind);
  report.digest = digest;

  TextFile energy(dir / "energy.csv");
  report.files.push_back("energy.csv");
  energy.line("# config " + digest);
  energy.line(
      "# units: t [time], kinetic [mass*length^2/time^2], divergence [length^2/time], "
      "newton_iters [1], residual [mixed]");
  energy.line("t,kinetic,divergence,newton_iters,residual");
  energy.row({0.0, stepper.kinetic_energy(state), stepper.divergence_norm(state), 0.0, 0.0});

  std::unique_ptr<TextFile> forces, trajectory;
  if (n_bodies > 0) {
    forces = std::make_unique<TextFile>(dir / "forces.csv");
    report.files.push_back("forces.csv");
    forces->line("# config " + digest);
    forces->line("# units: t [time], fx [force], fy [force], torque [force*length]");
    std::string head = "t";
    for (int b = 0; b < n_bodies; ++b) {
      const std::string tag = "body" + std::to_string(b);
      head += "," + tag + "_fx," + tag + "_fy," + tag + "_torque";
    }
    forces->line(head);

    trajectory = std::make_unique<TextFile>(dir / "trajectory.csv");
    report.files.push_back("trajectory.csv");
    trajectory->line("# config " + digest);
    trajectory->line(
        "# units: t [time], x [length], y [length], theta [rad], vx [length/time], "
        "vy [length/time], omega [rad/time]");
    head = "t";
    for (int b = 0; b < n_bodies; ++b) {
      const std::string tag = "body" + std::to_string(b);
      head += "," + tag + "_x," + tag + "_y," + tag + "_theta," + tag + "_vx," + tag +
              "_vy," + tag + "_omega";
    }
    trajectory->line(head);
  }

  auto trajectory_row = [&](const SimState& s) {
    if (!trajectory) return;
    std::vector<double> row{s.t};
    for (int b = 0; b < n_bodies; ++b) {
      for (int k = 0; k < 3; ++k) row.push_back(s.q[3 * b + k]);
      for (int k = 0; k < 3; ++k) row.push_back(s.vr[3 * b + k]);
    }
    trajectory->row(row);
  };
  trajectory_row(state);

  int snapshot_count = 0;
  auto snapshot = [&](const SimState& s, int step) {
    char name[32];
    std::snprintf(name, sizeof name, "fields_%06d.vtk", step);
    write_vtk(dir / name, setup.grid, s, config.integrator.h, digest);
    report.files.push_back(name);
    ++snapshot_count;
  };
  snapshot(state, 0);
  int last_snapshot_step = 0;

  ForceHistory history;
  history.dt = config.integrator.h * setup.output_every;
  const bool steady_scenario = setup.kind == ScenarioKind::poiseuille;
  SimState prev_state = state;
  bool steady = false;

  StepSink sink = [&](const StepRecord& rec, const SimState& s) {
    report.steps = rec.step;
    report.sim_time = rec.t;
    report.newton_total += rec.newton_iters;
    report.newton_max = std::max(report.newton_max, rec.newton_iters);
    report.final_residual = rec.residual_norm;
    report.final_energy = rec.energy;
    report.final_divergence = rec.divergence_norm;

    if (rec.step % setup.output_every == 0) {
      energy.row({rec.t, rec.energy, rec.divergence_norm,
                  static_cast<double>(rec.newton_iters), rec.residual_norm});
      if (forces) {
        std::vector<double> row{rec.t};
        for (int k = 0; k < rec.body_force.size(); ++k) row.push_back(rec.body_force[k]);
        forces->row(row);
      }
      trajectory_row(s);
      if (n_bodies > 0) {
        if (history.size() == 0) history.t0 = rec.t;
        history.append(rec.body_force[0], rec.body_force[1], rec.body_force[2]);
      }
    }
    if (rec.step % config.snapshot_every == 0) {
      snapshot(s, rec.step);
      last_snapshot_step = rec.step;
    }
  };

  StopCondition stop = [&](const SimState& a, const SimState& b) {
    prev_state = a;
    if (!steady_scenario) return false;
    const double change = (b.vf - a.vf).lpNorm<Eigen::Infinity>();
    const double scale = std::max(1e-30, b.vf.lpNorm<Eigen::Infinity>());
    steady = change <= 1e-9 * scale;
    return steady;
  };

  state = simulate(stepper, std::move(state), setup.n_steps, sink, stop);
  report.steady_stopped = steady;
  if (report.steps != last_snapshot_step) snapshot(state, report.steps);

  if (setup.kind == ScenarioKind::poiseuille) {
    TextFile profile(dir / "profile.csv");
    report.files.push_back("profile.csv");
    profile.line("# config " + digest);
    profile.line("# units: y [length], u [length/time], u_analytic [length/time]");
    profile.line("y,u,u_analytic");
    const Vec u = poiseuille_profile(setup.grid, state.vf);
    const Vec ua = poiseuille_analytic(setup.grid);
    for (int j = 0; j < u.size(); ++j)
      profile.row({setup.grid.cell_y[j], u[j], ua[j]});
    profile.close();
    try {
      report.profile_error = poiseuille_error(setup.grid, prev_state.vf, state.vf);
    } catch (const NonconvergenceError&) {
      report.profile_error = -1.0;  // not steady; leave the raw profile only
    }
  }

  if (setup.kind == ScenarioKind::disc && config.scenario.disc.u_infty > 0.0) {
    try {
      report.aero = aero_coefficients(history, config.scenario.props.rho,
                                      config.scenario.disc.u_infty,
                                      config.scenario.disc.diameter);
      report.has_aero = true;
    } catch (const ConfigValidationError&) {
      report.has_aero = false;  // history too short for coefficients
    }
  }

  if (setup.kind == ScenarioKind::swimmer && n_bodies > 0) {
    report.displacement = Vec2(state.q[0] - setup.q0[0], state.q[1] - setup.q0[1]);
    report.forward_displacement = report.displacement.dot(setup.forward);
  }

  energy.close();
  if (forces) forces->close();
  if (trajectory) trajectory->close();
  return report;
}

std::string report_text(const RunReport& report) {
  std::string out;
  out += "scenario: " + report.scenario + "\n";
  out += "digest: " + report.digest + "\n";
  out += "steps: " + std::to_string(report.steps) + " (sim time " + fmt(report.sim_time) +
         ")" + (report.steady_stopped ? " [steady stop]" : "") + "\n";
  out += "newton: total " + std::to_string(report.newton_total) + ", max " +
         std::to_string(report.newton_max) + ", final residual " +
         fmt(report.final_residual) + "\n";
  out += "energy: " + fmt(report.final_energy) + ", divergence: " +
         fmt(report.final_divergence) + "\n";
  if (report.profile_error >= 0.0)
    out += "profile error (rel L2): " + fmt(report.profile_error) + "\n";
  if (report.has_aero) {
    out += "aero: cd=" + fmt(report.aero.cd) + ", cl_amplitude=" +
           fmt(report.aero.cl_amplitude) + ", strouhal=" + fmt(report.aero.strouhal) +
           ", peak_ratio=" + fmt(report.aero.peak_ratio) +
           (report.aero.periodic ? " (periodic)" : " (steady)") + "\n";
  }
  if (report.scenario == "swimmer") {
    out += "displacement: (" + fmt(report.displacement.x()) + ", " +
           fmt(report.displacement.y()) + "), forward " +
           fmt(report.forward_displacement) + "\n";
  }
  out += "files: ";
  for (size_t k = 0; k < report.files.size(); ++k) {
    if (k) out += ", ";
    out += report.files[k];
  }
  out += "\n";
  return out;
}

std::string BenchReport::table() const {
  auto band = [](double lo, double hi) {
    std::string text = "[";
    text += (lo == -kInf) ? "-inf" : fmt(lo);
    text += ", ";
    text += (hi == kInf) ? "inf" : fmt(hi);
    text += "]";
    return text;
  };
  std::string out = "suite: " + suite + "\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-28s %14s %24s %8s", "metric", "value", "accept",
                "status");
  out += buf;
  out += '\n';
  for (const BenchRow& row : rows) {
    std::snprintf(buf, sizeof buf, "%-28s %14s %24s %8s", row.name.c_str(),
                  fmt(row.value).c_str(), band(row.lo, row.hi).c_str(),
                  row.pass ? "pass" : "FAIL");
    out += buf;
    out += '\n';
  }
  out += std::string("result: ") + (pass ? "pass" : "FAIL") + "\n";
  return out;
}

namespace {

struct MemberRun {
  std::string label;
  RunReport report;
};

/// Run one suite member under output_dir/<label>, prefixing any error with
/// the suite and member names.
RunReport member_run(const std::string& suite, const std::string& output_dir,
                     const std::string& label, RunConfig config,
                     std::vector<MemberRun>& members) {
  config.output_dir = (std::filesystem::path(output_dir) / label).string();
  try {
    RunReport report = run(config);
    members.push_back({label, report});
    return members.back().report;
  } catch (const Error& e) {
    rethrow_prefixed(e, "bench " + suite + " [" + label + "]: ");
  }
}

BenchReport finish(BenchReport report, const std::string& output_dir,
                   const std::vector<MemberRun>& members) {
  for (const BenchRow& row : report.rows) report.pass = report.pass && row.pass;
  std::filesystem::create_directories(output_dir);
  TextFile table(std::filesystem::path(output_dir) / (report.suite + "-table.txt"));
  table.line("# suite " + report.suite);
  for (const MemberRun& m : members) table.line("# config " + m.report.digest + " " + m.label);
  table.line("# units: see member run headers; coefficients and ratios are dimensionless");
  table.line(report.table());
  table.close();
  return report;
}

double poiseuille_settle_h(int cells, double rho, double mu) {
  const double dy = 1.0 / cells;
  // h = rho*dy^2/(2 mu) zeroes the midpoint amplification factor of the
  // stiffest viscous mode; every slower mode then decays monotonically.
  return rho * dy * dy / (2.0 * mu);
}

BenchReport bench_poiseuille(const std::string& output_dir) {
  BenchReport report;
  report.suite = "poiseuille-convergence";
  std::vector<MemberRun> members;
  const int cells[] = {8, 16, 32};
  double err[3] = {0, 0, 0};
  for (int k = 0; k < 3; ++k) {
    RunConfig cfg;
    cfg.scenario.kind = ScenarioKind::poiseuille;
    cfg.scenario.props.mu = 0.1;
    cfg.scenario.poiseuille.cells = cells[k];
    cfg.scenario.duration = 40.0;
    cfg.integrator.h =
        poiseuille_settle_h(cells[k], cfg.scenario.props.rho, cfg.scenario.props.mu);
    cfg.integrator.newton_tol = 1e-11;
    cfg.snapshot_every = 1000000;
    const RunReport r = member_run(report.suite, output_dir,
                                   "poiseuille-" + std::to_string(cells[k]), cfg, members);
    if (r.profile_error < 0.0)
      throw NonconvergenceError("bench poiseuille-convergence: the " +
                                    std::to_string(cells[k]) +
                                    "-cell run did not reach a steady profile",
                                0.0);
    err[k] = r.profile_error;
  }
  report.rows.push_back(make_row("rel_l2_err(8)", err[0], 0.0, 0.10));
  report.rows.push_back(make_row("rel_l2_err(16)", err[1], 0.0, 0.03));
  report.rows.push_back(make_row("rel_l2_err(32)", err[2], 0.0, 0.02));
  report.rows.push_back(make_row("ratio(8/16)", err[0] / err[1], 3.5, kInf));
  report.rows.push_back(make_row("ratio(16/32)", err[1] / err[2], 3.5, kInf));
  return finish(std::move(report), output_dir, members);
}

RunConfig disc_config(double reynolds, bool paper_scale) {
  RunConfig cfg;
  cfg.scenario.kind = ScenarioKind::disc;
  cfg.scenario.disc.reynolds = reynolds;
  cfg.scenario.disc.resolution = paper_scale ? 250 : 128;
  cfg.scenario.output_every = 1;
  cfg.snapshot_every = 1000000;
  return cfg;
}

BenchReport bench_disc_re40(const std::string& output_dir, bool paper_scale) {
  BenchReport report;
  report.suite = "disc-re40";
  std::vector<MemberRun> members;
  RunConfig cfg = disc_config(40.0, paper_scale);
  cfg.scenario.duration = paper_scale ? 60.0 : 45.0;
  cfg.integrator.h = paper_scale ? 0.1 : 0.15;
  const RunReport r = member_run(report.suite, output_dir,
                                 paper_scale ? "re40-paper" : "re40-desk", cfg, members);
  if (paper_scale) {
    report.rows.push_back(make_row("cd(250)", r.aero.cd, 1.58, 1.78));
  } else {
    report.rows.push_back(make_row("cd(128)", r.aero.cd, 1.50, 1.90));
  }
  report.rows.push_back(make_row("peak_ratio", r.aero.peak_ratio, -kInf, 10.0));
  return finish(std::move(report), output_dir, members);
}

BenchReport bench_disc_re100(const std::string& output_dir, bool paper_scale) {
  BenchReport report;
  report.suite = "disc-re100";
  std::vector<MemberRun> members;
  RunConfig cfg = disc_config(100.0, paper_scale);
  cfg.scenario.disc.shedding_trigger = true;
  cfg.scenario.duration = paper_scale ? 150.0 : 120.0;
  cfg.integrator.h = paper_scale ? 0.08 : 0.12;
  const RunReport r = member_run(report.suite, output_dir,
                                 paper_scale ? "re100-paper" : "re100-desk", cfg, members);
  if (paper_scale) {
    report.rows.push_back(make_row("strouhal(250)", r.aero.strouhal, 0.144, 0.184));
    report.rows.push_back(make_row("cd(250)", r.aero.cd, 1.29, 1.59));
    report.rows.push_back(make_row("cl_amplitude(250)", r.aero.cl_amplitude, 0.25, 0.45));
  } else {
    report.rows.push_back(make_row("strouhal(128)", r.aero.strouhal, 0.14, 0.19));
  }
  report.rows.push_back(make_row("peak_ratio", r.aero.peak_ratio, 10.0, kInf));
  return finish(std::move(report), output_dir, members);
}

BenchReport bench_swimmer(const std::string& output_dir) {
  BenchReport report;
  report.suite = "swimmer-demo";
  std::vector<MemberRun> members;
  RunConfig cfg;
  cfg.scenario.kind = ScenarioKind::swimmer;
  cfg.scenario.props.mu = 0.005;
  cfg.integrator.h = 0.01;
  cfg.snapshot_every = 1000000;
  const RunReport r = member_run(report.suite, output_dir, "swimmer", cfg, members);
  report.rows.push_back(
      make_row("forward_displacement", r.forward_displacement, 1e-6, kInf));
  return finish(std::move(report), output_dir, members);
}

}  // namespace

BenchReport bench(const std::string& suite, const std::string& output_dir,
                  bool paper_scale) {
  if (suite == "poiseuille-convergence") return bench_poiseuille(output_dir);
  if (suite == "disc-re40") return bench_disc_re40(output_dir, paper_scale);
  if (suite == "disc-re100") return bench_disc_re100(output_dir, paper_scale);
  if (suite == "swimmer-demo") return bench_swimmer(output_dir);
  throw UsageError("bench: unknown suite \"" + suite +
                   "\"; available: poiseuille-convergence, disc-re40, disc-re100, "
                   "swimmer-demo");
}

}  // namespace vfsim
