#ifndef INVABC_CAPI_H
#define INVABC_CAPI_H

/* C interface to the invasion-ABC library. Every entry point returns a
 * status code; on failure invabc_last_error() describes what went wrong
 * (thread-local, valid until the next call on the same thread). Handles are
 * opaque and must be released with the matching _free function. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum invabc_status {
  INVABC_OK = 0,
  INVABC_EINVAL = 1,   /* bad arguments or configuration */
  INVABC_EDATA = 2,    /* malformed or degenerate data */
  INVABC_EIO = 3,      /* file could not be opened or written */
  INVABC_ERUNTIME = 4, /* computation failed (init, numerics) */
} invabc_status;

typedef struct invabc_config invabc_config;
typedef struct invabc_dataset invabc_dataset;
typedef struct invabc_trace invabc_trace;

const char* invabc_last_error(void);

/* -- configuration ------------------------------------------------------- */

/* Fresh configuration with library defaults. */
invabc_status invabc_config_new(invabc_config** out);
/* Defaults overlaid with a `key = value` file. */
invabc_status invabc_config_load(const char* path, invabc_config** out);
/* Apply one key=value override in place. */
invabc_status invabc_config_set(invabc_config* cfg, const char* key,
                                const char* value);
/* Render the resolved configuration; free with invabc_string_free. */
invabc_status invabc_config_render(const invabc_config* cfg, char** out);
void invabc_config_free(invabc_config* cfg);

/* -- datasets ------------------------------------------------------------ */

/* Load presence/absence transects plus temporal spread rates from disk.
 * When warnings is non-NULL it receives a newline-joined report of suspect
 * but accepted values (or NULL if there were none); free with
 * invabc_string_free. */
invabc_status invabc_dataset_load(const char* transect_csv,
                                  const char* temporal_path,
                                  invabc_dataset** out, char** warnings);
/* Draw a synthetic dataset from the generative model under cfg. */
invabc_status invabc_dataset_simulate(const invabc_config* cfg,
                                      invabc_dataset** out);
/* Write the dataset back out; latents_csv may be NULL (and is only written
 * when the dataset carries simulated introduction histories). */
invabc_status invabc_dataset_write(const invabc_dataset* ds,
                                   const char* transect_csv,
                                   const char* temporal_path,
                                   const char* latents_csv);
invabc_status invabc_dataset_n_roads(const invabc_dataset* ds, int* out);
invabc_status invabc_dataset_n_groups(const invabc_dataset* ds, int* out);
void invabc_dataset_free(invabc_dataset* ds);

/* -- inference ----------------------------------------------------------- */

/* Transdimensional MCMC. Rows stream to trace_csv as they are recorded when
 * the path is non-NULL; latent introductions stream to latents_csv when that
 * path is non-NULL and the config records latents. */
invabc_status invabc_infer(const invabc_config* cfg, const invabc_dataset* ds,
                           const char* trace_csv, const char* latents_csv,
                           invabc_trace** out);
/* Rejection sampler over the same posterior; rows stream to trace_csv when
 * non-NULL. */
invabc_status invabc_rejection(const invabc_config* cfg,
                               const invabc_dataset* ds,
                               const char* trace_csv, invabc_trace** out);

invabc_status invabc_trace_rows(const invabc_trace* t, long long* out);
/* Post-hoc CSV dump of an in-memory trace. */
invabc_status invabc_trace_write_csv(const invabc_trace* t, const char* path);
/* Quantile table plus acceptance counters; free with invabc_string_free. */
invabc_status invabc_trace_summary(const invabc_trace* t, char** out);
/* hist_<parameter>.svg per continuous parameter, written under dir. */
invabc_status invabc_trace_histograms(const invabc_trace* t, const char* dir);
void invabc_trace_free(invabc_trace* t);

/* -- exact oracle -------------------------------------------------------- */

/* Likelihood of every observable pattern under (oracle_lambda, oracle_nu,
 * oracle_age), as CSV. */
invabc_status invabc_oracle_table(const invabc_config* cfg, const char* path);
/* Gridded posterior over a shared rate for a single-group dataset with the
 * spread speed pinned at oracle_nu, as CSV. */
invabc_status invabc_oracle_grid(const invabc_config* cfg,
                                 const invabc_dataset* ds, const char* path);

/* -- calibration study --------------------------------------------------- */

/* Simulate-and-refit coverage study; per-parameter rows as CSV. */
invabc_status invabc_study(const invabc_config* cfg, const char* path);

/* -- forward projection -------------------------------------------------- */

/* Seed a road network, project invasion onto the habitat raster, and write
 * the invaded-cell raster, a one-row summary CSV, and an SVG overlay.
 * out_invaded_km2 / out_fraction may be NULL. */
invabc_status invabc_project(const invabc_config* cfg, const char* network_csv,
                             const char* habitat_path, const char* invaded_out,
                             const char* summary_csv, const char* mask_svg,
                             double* out_invaded_km2, double* out_fraction);

/* -- utilities ----------------------------------------------------------- */

/* 64-bit FNV-1a hash of a file's bytes. */
invabc_status invabc_hash_file(const char* path, uint64_t* out);
void invabc_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* INVABC_CAPI_H */
