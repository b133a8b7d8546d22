#ifndef PLASMON_FFI_H
#define PLASMON_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum PlasmonStatus {
  PLASMON_STATUS_OK = 0,
  PLASMON_STATUS_NULL_POINTER = 1,
  PLASMON_STATUS_INVALID_ARGUMENT = 2,
  PLASMON_STATUS_DOMAIN = 3,
  PLASMON_STATUS_SINGULARITY = 4,
  PLASMON_STATUS_RANGE = 5,
  PLASMON_STATUS_PARSE = 6,
  /**
   * Output was written but the solver did not meet its tolerance.
   */
  PLASMON_STATUS_NOT_CONVERGED = 7,
  PLASMON_STATUS_IO = 8,
  PLASMON_STATUS_PANIC = 9,
} PlasmonStatus;

typedef enum PlasmonGModel {
  PLASMON_G_MODEL_ZERO = 0,
  PLASMON_G_MODEL_CONSTANT = 1,
  PLASMON_G_MODEL_DRUDE = 2,
} PlasmonGModel;

typedef enum PlasmonGrid {
  PLASMON_GRID_LINEAR = 0,
  PLASMON_GRID_LOG = 1,
} PlasmonGrid;

/**
 * Film description. Create with `plasmon_film_new*`.
 */
typedef struct PlasmonFilm PlasmonFilm;

/**
 * Completed sweep. Create with `plasmon_sweep_run`.
 */
typedef struct PlasmonSweep PlasmonSweep;

typedef struct PlasmonRootConfig {
  double tol_residual;
  uint32_t max_iter;
  double fd_step_rel;
  uint32_t damping_halvings;
} PlasmonRootConfig;

typedef struct PlasmonComplex {
  double re;
  double im;
} PlasmonComplex;

typedef struct PlasmonPoint {
  double k;
  struct PlasmonComplex omega;
  struct PlasmonComplex alpha;
  struct PlasmonComplex g;
  double residual_abs;
  uint32_t iterations;
  bool converged;
} PlasmonPoint;

typedef struct PlasmonSlabMode {
  double k;
  struct PlasmonComplex omega;
  struct PlasmonComplex kappa_out;
  struct PlasmonComplex kappa_in;
  double residual_abs;
  uint32_t iterations;
} PlasmonSlabMode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *plasmon_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *plasmon_version(void);

struct PlasmonRootConfig plasmon_root_config_default(void);

/**
 * Creates a film. `g0` is used only by the constant model.
 *
 * # Safety
 * `out` must be null or point to writable storage for one pointer.
 */
enum PlasmonStatus plasmon_film_new(double thickness,
                                    double collision_rate,
                                    enum PlasmonGModel model,
                                    struct PlasmonComplex g0,
                                    struct PlasmonFilm **out);

/**
 * Creates a film whose G is read from a CSV table (`omega,g_re,g_im`).
 *
 * # Safety
 * `path` must be null or a NUL-terminated string; `out` as for
 * [`plasmon_film_new`].
 */
enum PlasmonStatus plasmon_film_new_with_table(double thickness,
                                               double collision_rate,
                                               const char *path,
                                               struct PlasmonFilm **out);

/**
 * # Safety
 * `film` must be null or a handle from `plasmon_film_new*` not yet freed.
 */
void plasmon_film_free(struct PlasmonFilm *film);

/**
 * Dispersion residual `F(Ω)` at wavevector `k`.
 *
 * # Safety
 * `film` must be a live handle; `out` must be writable.
 */
enum PlasmonStatus plasmon_residual(const struct PlasmonFilm *film,
                                    double k,
                                    struct PlasmonComplex omega,
                                    struct PlasmonComplex *out);

/**
 * Solves for the mode at `k`. `seed` and `cfg` may be null for defaults.
 * Returns `NOT_CONVERGED` with `out` filled when the tolerance was missed.
 *
 * # Safety
 * `film` must be a live handle; `seed` and `cfg` null or valid; `out`
 * writable.
 */
enum PlasmonStatus plasmon_solve_point(const struct PlasmonFilm *film,
                                       double k,
                                       const struct PlasmonComplex *seed,
                                       const struct PlasmonRootConfig *cfg,
                                       struct PlasmonPoint *out);

/**
 * Exact slab mode of a Drude film near `seed`.
 *
 * # Safety
 * `cfg` null or valid; `out` writable.
 */
enum PlasmonStatus plasmon_tmm_solve(double k,
                                     double thickness,
                                     double collision_rate,
                                     struct PlasmonComplex seed,
                                     const struct PlasmonRootConfig *cfg,
                                     struct PlasmonSlabMode *out);

/**
 * Decay constant `√(K² − Ω²)` with non-negative real part.
 */
struct PlasmonComplex plasmon_alpha(double k, struct PlasmonComplex omega);

/**
 * `2K/√(4 + K²D²)`.
 */
double plasmon_closed_form_lowfreq(double k, double thickness);

/**
 * `K(1 − K²D²/8)`.
 */
double plasmon_smallk_expansion(double k, double thickness);

/**
 * Runs a sweep. A handle is produced whenever the request is valid; the
 * status is `NOT_CONVERGED` if any grid point failed.
 *
 * # Safety
 * `film` must be a live handle; `cfg` null or valid; `out` writable.
 */
enum PlasmonStatus plasmon_sweep_run(const struct PlasmonFilm *film,
                                     double k_min,
                                     double k_max,
                                     size_t n_points,
                                     enum PlasmonGrid grid,
                                     const struct PlasmonRootConfig *cfg,
                                     bool compare_tmm,
                                     struct PlasmonSweep **out);

/**
 * Number of converged points. Returns 0 for a null handle.
 *
 * # Safety
 * `sweep` must be null or a live handle.
 */
size_t plasmon_sweep_len(const struct PlasmonSweep *sweep);

/**
 * Number of grid points that failed. Returns 0 for a null handle.
 *
 * # Safety
 * `sweep` must be null or a live handle.
 */
size_t plasmon_sweep_failure_count(const struct PlasmonSweep *sweep);

/**
 * Converged point `index`, in ascending `k`.
 *
 * # Safety
 * `sweep` must be a live handle; `out` writable.
 */
enum PlasmonStatus plasmon_sweep_point(const struct PlasmonSweep *sweep,
                                       size_t index,
                                       struct PlasmonPoint *out);

/**
 * Wavevector of failed grid point `index`.
 *
 * # Safety
 * `sweep` must be a live handle; `out` writable.
 */
enum PlasmonStatus plasmon_sweep_failure_k(const struct PlasmonSweep *sweep,
                                           size_t index,
                                           double *out);

/**
 * Renders the sweep as CSV. Release the string with `plasmon_string_free`.
 *
 * # Safety
 * `sweep` must be a live handle; `out` writable.
 */
enum PlasmonStatus plasmon_sweep_to_csv(const struct PlasmonSweep *sweep, char **out);

/**
 * Renders the sweep as JSON. Release the string with `plasmon_string_free`.
 *
 * # Safety
 * `sweep` must be a live handle; `out` writable.
 */
enum PlasmonStatus plasmon_sweep_to_json(const struct PlasmonSweep *sweep, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void plasmon_string_free(char *s);

/**
 * # Safety
 * `sweep` must be null or a handle from `plasmon_sweep_run` not yet freed.
 */
void plasmon_sweep_free(struct PlasmonSweep *sweep);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLASMON_FFI_H */
