// File: main.cpp
// Command-line front end. Links the C API only; exit codes are the
// vfsim_status values, so scripts can branch on the error category.
#include <vfsim/vfsim.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

namespace {

int fail(vfsim_status status) {
  std::fprintf(stderr, "error: %s\n", vfsim_last_error());
  return static_cast<int>(status);
}

struct ConfigHandle {
  vfsim_config* ptr = nullptr;
  ~ConfigHandle() { vfsim_config_free(ptr); }
};

struct ReportHandle {
  vfsim_report* ptr = nullptr;
  ~ReportHandle() { vfsim_report_free(ptr); }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_run(const std::string& config_path, const std::string& output_dir,
            int snapshot_every) {
  ConfigHandle config;
  if (vfsim_status s = vfsim_config_load(config_path.c_str(), &config.ptr); s != VFSIM_OK)
    return fail(s);
  std::fputs(vfsim_config_summary(config.ptr), stdout);

  vfsim_run_options options{output_dir.empty() ? nullptr : output_dir.c_str(),
                            snapshot_every};
  const auto start = std::chrono::steady_clock::now();
  ReportHandle report;
  if (vfsim_status s = vfsim_run(config.ptr, &options, &report.ptr); s != VFSIM_OK)
    return fail(s);
  std::fputs(vfsim_report_text(report.ptr), stdout);
  std::printf("wall seconds: %.1f\n", seconds_since(start));
  return 0;
}

int cmd_bench(const std::string& suite, const std::string& output_dir, bool paper_scale) {
  vfsim_run_options options{output_dir.empty() ? nullptr : output_dir.c_str(), 0};
  const auto start = std::chrono::steady_clock::now();
  ReportHandle report;
  if (vfsim_status s = vfsim_bench(suite.c_str(), &options, paper_scale ? 1 : 0,
                                   &report.ptr);
      s != VFSIM_OK)
    return fail(s);
  std::fputs(vfsim_report_text(report.ptr), stdout);
  std::printf("wall seconds: %.1f\n", seconds_since(start));
  return vfsim_report_pass(report.ptr) ? 0 : 1;
}

int cmd_validate(const std::string& config_path) {
  ConfigHandle config;
  if (vfsim_status s = vfsim_config_load(config_path.c_str(), &config.ptr); s != VFSIM_OK)
    return fail(s);
  if (vfsim_status s = vfsim_validate(config.ptr); s != VFSIM_OK) return fail(s);
  std::fputs(vfsim_config_summary(config.ptr), stdout);
  std::printf("valid\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setenv("OPENBLAS_NUM_THREADS", "1", 0);  // keep the factorization deterministic

  CLI::App app{"vfsim: incompressible flow coupled to rigid multibody dynamics"};
  app.require_subcommand(1);
  app.footer("Exit codes follow vfsim_status; bench exits 1 when a metric "
             "misses its acceptance band.");

  std::string config_path, output_dir, suite;
  int snapshot_every = 0;
  bool paper_scale = false;

  CLI::App* run = app.add_subcommand("run", "Execute a configured simulation");
  run->add_option("config", config_path, "JSON configuration file")->required();
  run->add_option("--output-dir", output_dir, "Override the configured output directory");
  run->add_option("--snapshot-every", snapshot_every, "Override the snapshot cadence")
      ->check(CLI::PositiveNumber);

  CLI::App* bench = app.add_subcommand("bench", "Run a benchmark suite");
  bench->add_option("suite", suite,
                    "poiseuille-convergence, disc-re40, disc-re100 or swimmer-demo")
      ->required();
  bench->add_option("--output-dir", output_dir, "Directory for benchmark outputs");
  bench->add_flag("--paper-scale", paper_scale,
                  "Published resolutions instead of the quick desk setup (long running)");

  CLI::App* validate =
      app.add_subcommand("validate", "Parse and build a configuration without running");
  validate->add_option("config", config_path, "JSON configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(VFSIM_ERR_USAGE);
  }

  if (run->parsed()) return cmd_run(config_path, output_dir, snapshot_every);
  if (bench->parsed()) return cmd_bench(suite, output_dir, paper_scale);
  return cmd_validate(config_path);
}
