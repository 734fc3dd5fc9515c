/* semdiff — interest-diffusion analysis on co-authorship networks.
 *
 * C API over the pipeline library. All functions are thread-compatible:
 * distinct contexts may be used from distinct threads concurrently, a single
 * context must not be shared without external synchronization.
 */
#ifndef SEMDIFF_H
#define SEMDIFF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SEMDIFF_API __declspec(dllexport)
#else
#define SEMDIFF_API __attribute__((visibility("default")))
#endif

typedef enum semdiff_status {
  SEMDIFF_OK = 0,
  SEMDIFF_ERR_INVALID_ARGUMENT = 1,
  SEMDIFF_ERR_IO = 2,
  SEMDIFF_ERR_RUNTIME = 3
} semdiff_status;

/* Opaque handle carrying per-call error state. */
typedef struct semdiff_ctx semdiff_ctx;

SEMDIFF_API const char* semdiff_version(void);

SEMDIFF_API semdiff_ctx* semdiff_ctx_new(void);
SEMDIFF_API void semdiff_ctx_free(semdiff_ctx* ctx);

/* Message for the most recent failing call on this context; empty string
 * when the last call succeeded. The pointer stays valid until the next call
 * on the same context. */
SEMDIFF_API const char* semdiff_last_error(const semdiff_ctx* ctx);

/* Runs one pipeline stage ("ingest", "index", "trend", "graph", "profile",
 * "fit", "simulate", "compare", "report"). Options are a UTF-8 JSON object;
 * the key "config" may name a TOML run-config file whose [stage] table
 * supplies defaults, with explicit options winning. Stages communicate only
 * through the files named in the options. */
SEMDIFF_API semdiff_status semdiff_run_stage(semdiff_ctx* ctx, const char* stage,
                                             const char* options_json);

/* Constrained least-squares fit of the transition model
 * y = x_neighbor * u + x_trend * v over n samples. has_neighbors[i] == 0
 * zeroes the u term for that sample. Outputs may be NULL when not wanted. */
typedef struct semdiff_fit_result {
  double x_neighbor_raw;
  double x_trend_raw;
  double x_neighbor_proj; /* inside x>=0, y>=0, x+y<=1 */
  double x_trend_proj;
  double chi2_full;
  double chi2_proj;
  double chi2_null;
  int32_t status; /* 0 interior, 1 boundary, 2 degenerate_no_neighbors,
                     3 degenerate_singular, 4 insufficient_data */
} semdiff_fit_result;

SEMDIFF_API semdiff_status semdiff_fit_samples(semdiff_ctx* ctx, size_t n, const double* y,
                                               const double* u, const double* v,
                                               const uint8_t* has_neighbors,
                                               semdiff_fit_result* out);

/* One synchronous diffusion step over a dense state.
 *   profiles: n_members * n_topics row-major, overwritten in place.
 *   trend:    n_topics.
 *   adjacency: CSR-style; offsets has n_members+1 entries into neighbor_ids.
 * Parameters must satisfy x_neighbor >= 0, x_trend >= 0, sum <= 1. */
SEMDIFF_API semdiff_status semdiff_step_discrete(semdiff_ctx* ctx, size_t n_members,
                                                 size_t n_topics, double* profiles,
                                                 const double* trend, const double* x_neighbor,
                                                 const double* x_trend, const uint64_t* offsets,
                                                 const uint32_t* neighbor_ids);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SEMDIFF_H */
