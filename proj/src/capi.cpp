// File: capi.cpp
#include "vfsim/vfsim.h"

#include <string>

#include "runner.hpp"

struct vfsim_config {
  vfsim::RunConfig config;
  std::string digest;
  std::string summary;
};

struct vfsim_report {
  std::string text;
  int pass = 1;
};

namespace {

thread_local std::string g_last_error;

vfsim_status record_failure(const vfsim::Error& e) {
  g_last_error = e.what();
  return static_cast<vfsim_status>(static_cast<int>(e.category()));
}

vfsim_status usage_failure(const char* message) {
  g_last_error = message;
  return VFSIM_ERR_USAGE;
}

template <class Fn>
vfsim_status guarded(Fn&& fn) {
  try {
    fn();
    return VFSIM_OK;
  } catch (const vfsim::Error& e) {
    return record_failure(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VFSIM_ERR_INTERNAL;
  }
}

vfsim::RunConfig with_options(const vfsim::RunConfig& base, const vfsim_run_options* options) {
  vfsim::RunConfig config = base;
  if (options) {
    if (options->output_dir) config.output_dir = options->output_dir;
    if (options->snapshot_every > 0) config.snapshot_every = options->snapshot_every;
  }
  return config;
}

vfsim_config* wrap_config(vfsim::RunConfig parsed) {
  auto* handle = new vfsim_config{std::move(parsed), {}, {}};
  handle->digest = vfsim::config_digest(handle->config);
  handle->summary = vfsim::describe_config(handle->config);
  return handle;
}

}  // namespace

extern "C" {

const char* vfsim_last_error(void) { return g_last_error.c_str(); }

const char* vfsim_version(void) { return "0.1.0"; }

vfsim_status vfsim_config_parse(const char* json_text, vfsim_config** out) {
  if (!json_text || !out) return usage_failure("vfsim_config_parse: NULL argument");
  *out = nullptr;
  return guarded([&] { *out = wrap_config(vfsim::parse_config(json_text)); });
}

vfsim_status vfsim_config_load(const char* path, vfsim_config** out) {
  if (!path || !out) return usage_failure("vfsim_config_load: NULL argument");
  *out = nullptr;
  return guarded([&] { *out = wrap_config(vfsim::load_config_file(path)); });
}

void vfsim_config_free(vfsim_config* config) { delete config; }

const char* vfsim_config_digest(const vfsim_config* config) {
  return config ? config->digest.c_str() : "";
}

const char* vfsim_config_summary(const vfsim_config* config) {
  return config ? config->summary.c_str() : "";
}

vfsim_status vfsim_validate(const vfsim_config* config) {
  if (!config) return usage_failure("vfsim_validate: NULL config");
  return guarded(
      [&] { vfsim::build_scenario(config->config.scenario, config->config.integrator); });
}

vfsim_status vfsim_run(const vfsim_config* config, const vfsim_run_options* options,
                       vfsim_report** out) {
  if (!config || !out) return usage_failure("vfsim_run: NULL argument");
  *out = nullptr;
  return guarded([&] {
    const vfsim::RunReport report = vfsim::run(with_options(config->config, options));
    *out = new vfsim_report{vfsim::report_text(report), 1};
  });
}

vfsim_status vfsim_bench(const char* suite, const vfsim_run_options* options,
                         int paper_scale, vfsim_report** out) {
  if (!suite || !out) return usage_failure("vfsim_bench: NULL argument");
  *out = nullptr;
  return guarded([&] {
    std::string output_dir = "bench-out";
    if (options && options->output_dir) output_dir = options->output_dir;
    const vfsim::BenchReport report = vfsim::bench(suite, output_dir, paper_scale != 0);
    *out = new vfsim_report{report.table(), report.pass ? 1 : 0};
  });
}

const char* vfsim_report_text(const vfsim_report* report) {
  return report ? report->text.c_str() : "";
}

int vfsim_report_pass(const vfsim_report* report) { return report ? report->pass : 0; }

void vfsim_report_free(vfsim_report* report) { delete report; }

}  // extern "C"
