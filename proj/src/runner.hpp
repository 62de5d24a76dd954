/// @file runner.hpp
/// Run orchestration: executes a configured scenario, streams the time
/// series to CSV, snapshots fields to legacy VTK, and summarizes the
/// diagnostics. The bench entry point wraps curated benchmark suites and
/// renders pass/fail comparison tables against the accepted reference
/// bands.
#pragma once

#include <vector>

#include "config.hpp"

namespace vfsim {

struct RunReport {
  std::string scenario;
  std::string digest;
  int steps = 0;            // steps actually taken (early stop possible)
  double sim_time = 0.0;
  int newton_total = 0;
  int newton_max = 0;
  double final_residual = 0.0;
  double final_energy = 0.0;
  double final_divergence = 0.0;
  bool steady_stopped = false;        // per-step change fell below 1e-9
  double profile_error = -1.0;        // poiseuille; < 0 when not steady
  bool has_aero = false;              // disc with a free stream
  AeroCoefficients aero;
  Vec2 displacement = Vec2::Zero();   // swimmer main body, final minus initial
  double forward_displacement = 0.0;  // displacement along the body axis
  std::vector<std::string> files;     // written files, relative to output_dir
};

/// Execute one run. Writes energy.csv plus, where applicable, forces.csv,
/// trajectory.csv, profile.csv and fields_NNNNNN.vtk snapshots into
/// config.output_dir. Output is deterministic: identical configurations
/// produce byte-identical files.
RunReport run(const RunConfig& config);

/// One metric of a benchmark table with its acceptance band.
struct BenchRow {
  std::string name;
  double value = 0.0;
  double lo = 0.0, hi = 0.0;  // inclusive band; +-inf for one-sided
  bool pass = false;
};

struct BenchReport {
  std::string suite;
  std::vector<BenchRow> rows;
  bool pass = true;
  std::string table() const;
};

/// Run a named suite: poiseuille-convergence, disc-re40, disc-re100 or
/// swimmer-demo. Member runs write under output_dir/<label>/ and the
/// rendered table lands in output_dir/<suite>-table.txt. Unknown names
/// throw UsageError. paper_scale switches the disc suites to the
/// published-resolution setup (long running).
BenchReport bench(const std::string& suite, const std::string& output_dir, bool paper_scale);

std::string report_text(const RunReport& report);

}  // namespace vfsim
