#ifndef BLQQ_H
#define BLQQ_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Which model to fit.
typedef enum BlqqModel {
  // Joint latent-variable model.
  BLQQ_MODEL_JOINT = 0,
  // Separate probit and linear models.
  BLQQ_MODEL_SEPARATE = 1,
} BlqqModel;

// Result code of every fallible call.
typedef enum BlqqStatus {
  BLQQ_STATUS_OK = 0,
  // A required pointer argument was null.
  BLQQ_STATUS_NULL_POINTER = 1,
  // Invalid input: bad values, dimensions or file contents.
  BLQQ_STATUS_INVALID_ARGUMENT = 2,
  // The sampler failed numerically on valid input.
  BLQQ_STATUS_NUMERIC = 3,
  // A file could not be read or written.
  BLQQ_STATUS_IO = 4,
  // An output buffer is too small.
  BLQQ_STATUS_BUFFER_TOO_SMALL = 5,
  // Internal panic; the library state is unchanged.
  BLQQ_STATUS_PANIC = 6,
} BlqqStatus;

// Opaque dataset handle.
typedef struct BlqqDataset BlqqDataset;

// Opaque handle to a finished fit.
typedef struct BlqqFit BlqqFit;

// Chain settings; obtain defaults from [`blqq_chain_options_default`].
typedef struct BlqqChainOptions {
  size_t iterations;
  size_t burn_in;
  size_t thin;
  uint64_t seed;
  enum BlqqModel model;
} BlqqChainOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null if none. The string
// stays valid until the next failing call on the same thread.
const char *blqq_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *blqq_version(void);

// Defaults: 10,000 iterations, 1,000 burn-in, no thinning, joint model.
struct BlqqChainOptions blqq_chain_options_default(void);

// Build a dataset from a row-major `n × p` design, `n` responses `y` and
// `n` binary outcomes `z` (0 or 1). Effect orders default to all 1.
enum BlqqStatus blqq_dataset_new(const double *x,
                                 const double *y,
                                 const uint8_t *z,
                                 size_t n,
                                 size_t p,
                                 struct BlqqDataset **out);

// Read a dataset CSV (columns `y`, `z` and predictors; optional
// `#orders:` line).
enum BlqqStatus blqq_dataset_from_csv(const char *path, struct BlqqDataset **out);

// Replace the effect orders with `len` values (`len` must equal p).
enum BlqqStatus blqq_dataset_set_orders(struct BlqqDataset *ds, const uint32_t *orders, size_t len);

// Number of observations, or 0 for a null handle.
size_t blqq_dataset_n(const struct BlqqDataset *ds);

// Number of predictors, or 0 for a null handle.
size_t blqq_dataset_p(const struct BlqqDataset *ds);

// Release a dataset; null is ignored.
void blqq_dataset_free(struct BlqqDataset *ds);

// Run a chain with default priors. `options` may be null for defaults.
enum BlqqStatus blqq_fit(const struct BlqqDataset *ds,
                         const struct BlqqChainOptions *options,
                         struct BlqqFit **out);

// Release a fit; null is ignored.
void blqq_fit_free(struct BlqqFit *fit);

// Number of stored draws, or 0 for a null handle.
size_t blqq_fit_draw_count(const struct BlqqFit *fit);

// Posterior means. `beta1` and `beta2` must hold `p` values each;
// `sigma2` and `rho` receive scalars.
enum BlqqStatus blqq_fit_posterior_mean(const struct BlqqFit *fit,
                                        double *beta1,
                                        double *beta2,
                                        size_t p,
                                        double *sigma2,
                                        double *rho);

// Copy the stored ρ draws into `out` (room for `len` values).
enum BlqqStatus blqq_fit_rho_draws(const struct BlqqFit *fit, double *out, size_t len);

// Post-burn-in acceptance rates of σ², ρ, r₁, r₂ into `out[0..4]`; NaN
// for a target that was held fixed.
enum BlqqStatus blqq_fit_acceptance(const struct BlqqFit *fit, double *out);

// Posterior-mean prediction at one design row `x` of length `p`.
enum BlqqStatus blqq_predict(const struct BlqqFit *fit,
                             const double *x,
                             size_t p,
                             double *y_hat,
                             double *p_z1,
                             uint8_t *z_hat);

// Write the stored draws as a chain CSV.
enum BlqqStatus blqq_fit_write_chain(const struct BlqqFit *fit, const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLQQ_H */
