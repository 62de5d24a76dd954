/// @file scenarios.hpp
/// Benchmark and demo scenario builders plus their quantitative
/// diagnostics: plane Poiseuille flow driven by a body force, a fixed disc
/// in a free stream with drag/lift/Strouhal extraction, and a two-fin
/// swimmer with a prescribed sinusoidal gait.
#pragma once

#include "integrator.hpp"

namespace vfsim {

enum class ScenarioKind { poiseuille, disc, swimmer };

struct PoiseuilleParams {
  int cells = 32;      // cells across the channel height
  double height = 1.0;
  double drive = 0.8;  // body-force density, the equivalent pressure gradient
};

struct DiscParams {
  double diameter = 1.0;
  double u_infty = 1.0;
  double reynolds = 40.0;
  int resolution = 128;  // cells per side of the square grid
  double domain_diameters = 15.0;
  Vec2 center_diameters = Vec2(5.0, 7.5);
  bool shedding_trigger = false;    // deterministic cross-stream kick
  int trigger_steps = 100;          // duration of the kick in steps
  double trigger_amplitude = 0.05;  // cross-stream fraction of u_infty
};

struct SwimmerParams {
  int resolution = 100;
  double domain = 1.0;
  double body_length = 0.24;
  double body_width = 0.08;
  double fin_length = 0.10;
  double density_ratio = 1.0;     // body density over fluid density
  double gait_amplitude = 0.25;   // fin deflection, radians
  double gait_frequency = 1.0;    // gait cycles per time unit
  double gait_phase_lag = 0.0;    // bottom fin phase lag, radians
  int cycles = 5;
  bool mirrored = false;  // reflect the gait across the body axis
};

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::poiseuille;
  FluidProperties props;  // mu of the disc scenario is derived from reynolds
  double duration = 0.0;  // simulated time; <= 0 selects a per-kind default
  int output_every = 1;   // sample cadence for time series, in steps
  PoiseuilleParams poiseuille;
  DiscParams disc;
  SwimmerParams swimmer;
};

/// Everything a run needs: the assembled grid and bodies, initial state,
/// optional time-dependent boundary values, step count and the reference
/// scales used by the diagnostics.
struct ScenarioSetup {
  ScenarioKind kind = ScenarioKind::poiseuille;
  FluidGrid grid;
  BodySystem bodies;
  BcSchedule bc;  // empty: constant values from the grid config
  Vec vf0, q0;
  int n_steps = 0;
  int output_every = 1;
  double u_ref = 0.0, length_ref = 0.0;  // coefficient scales (disc)
  Vec2 forward = Vec2(1.0, 0.0);         // swimmer body axis at start
};

ScenarioSetup build_poiseuille(const ScenarioSpec& spec, const IntegratorConfig& integ);
ScenarioSetup build_disc(const ScenarioSpec& spec, const IntegratorConfig& integ);
ScenarioSetup build_swimmer(const ScenarioSpec& spec, const IntegratorConfig& integ);
ScenarioSetup build_scenario(const ScenarioSpec& spec, const IntegratorConfig& integ);

/// Streamwise velocity averaged over x, one value per cell row.
Vec poiseuille_profile(const FluidGrid& grid, const Vec& vf);
/// The analytic steady profile (drive/2mu)*y*(H - y) at the same heights,
/// reading drive and viscosity back from the grid properties.
Vec poiseuille_analytic(const FluidGrid& grid);
/// Relative L2 distance between the computed and analytic profiles. The
/// previous-step field guards the steadiness precondition: the call throws
/// NonconvergenceError unless per-step change <= 1e-8 * field magnitude.
double poiseuille_error(const FluidGrid& grid, const Vec& vf_prev, const Vec& vf);

/// Uniformly sampled force/torque series for one body.
struct ForceHistory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> fx, fy, torque;

  int size() const { return static_cast<int>(fx.size()); }
  void append(double fx_k, double fy_k, double torque_k) {
    fx.push_back(fx_k);
    fy.push_back(fy_k);
    torque.push_back(torque_k);
  }
};

struct AeroCoefficients {
  double cd = 0.0;            // mean drag coefficient
  double cl_amplitude = 0.0;  // half peak-to-peak lift coefficient
  double strouhal = 0.0;      // 0 when no periodic peak stands out
  double peak_ratio = 0.0;    // dominant spectral peak over the noise floor
  bool periodic = false;      // peak_ratio >= 10
};

/// Coefficients from a force history: the first 30% is discarded as
/// transient, the shedding frequency comes from the dominant discrete
/// Fourier peak of the lift series, and the noise floor is the median
/// spectral magnitude.
AeroCoefficients aero_coefficients(const ForceHistory& history, double rho, double u_infty,
                                   double diameter);

BoundaryMesh circle_mesh(double radius, int segments);
BoundaryMesh rectangle_mesh(double length, double width, double max_segment);
BoundaryMesh plate_mesh(double length, double max_segment);

}  // namespace vfsim
