/// @file vfsim.h
/// C interface to the fluid-structure simulator. All entry points return a
/// status code; on failure vfsim_last_error() describes what went wrong.
/// Objects returned through out-parameters are owned by the caller and
/// released with the matching _free function.
#ifndef VFSIM_H
#define VFSIM_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vfsim_status {
  VFSIM_OK = 0,
  VFSIM_ERR_INTERNAL = 1,
  VFSIM_ERR_CONFIG_PARSE = 2,
  VFSIM_ERR_CONFIG_VALIDATION = 3,
  VFSIM_ERR_DIMENSION = 4,
  VFSIM_ERR_GEOMETRY = 5,
  VFSIM_ERR_SCHEDULE = 6,
  VFSIM_ERR_NONCONVERGENCE = 7,
  VFSIM_ERR_SINGULAR = 8,
  VFSIM_ERR_IO = 9,
  VFSIM_ERR_USAGE = 10
} vfsim_status;

typedef struct vfsim_config vfsim_config;
typedef struct vfsim_report vfsim_report;

/* Optional overrides applied on top of a parsed configuration. A NULL
 * options pointer, a NULL output_dir or a snapshot_every of zero keep the
 * configured values. */
typedef struct vfsim_run_options {
  const char* output_dir;
  int snapshot_every;
} vfsim_run_options;

/* Message describing the most recent failure on this thread. Never NULL;
 * empty before the first failure. Valid until the next failing call. */
const char* vfsim_last_error(void);

const char* vfsim_version(void);

/* Parse a JSON configuration document. */
vfsim_status vfsim_config_parse(const char* json_text, vfsim_config** out);

/* Read and parse a JSON configuration file. */
vfsim_status vfsim_config_load(const char* path, vfsim_config** out);

void vfsim_config_free(vfsim_config* config);

/* 16 hex digits identifying the resolved configuration; owned by config. */
const char* vfsim_config_digest(const vfsim_config* config);

/* Human-readable multi-line summary; owned by config. */
const char* vfsim_config_summary(const vfsim_config* config);

/* Build the configured scenario without running it, surfacing validation
 * and geometry errors. */
vfsim_status vfsim_validate(const vfsim_config* config);

/* Execute a run; writes the output files and returns a report. */
vfsim_status vfsim_run(const vfsim_config* config, const vfsim_run_options* options,
                       vfsim_report** out);

/* Execute a named benchmark suite: poiseuille-convergence, disc-re40,
 * disc-re100 or swimmer-demo. paper_scale nonzero selects the published
 * resolutions (long running). */
vfsim_status vfsim_bench(const char* suite, const vfsim_run_options* options,
                         int paper_scale, vfsim_report** out);

/* Rendered report text; owned by the report. */
const char* vfsim_report_text(const vfsim_report* report);

/* 1 when every benchmark metric landed in its acceptance band (always 1
 * for plain runs). */
int vfsim_report_pass(const vfsim_report* report);

void vfsim_report_free(vfsim_report* report);

#ifdef __cplusplus
}
#endif

#endif /* VFSIM_H */
