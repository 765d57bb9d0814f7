#ifndef USC_ARRAY_H
#define USC_ARRAY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum UscStatus {
  USC_STATUS_OK = 0,
  USC_STATUS_NULL_POINTER = 1,
  USC_STATUS_INVALID_ARGUMENT = 2,
  USC_STATUS_VALIDATION = 3,
  USC_STATUS_UNSUPPORTED = 4,
  USC_STATUS_BRACKETING = 5,
  USC_STATUS_CONVERGENCE = 6,
  USC_STATUS_IO = 7,
  USC_STATUS_BUFFER_TOO_SMALL = 8,
  USC_STATUS_INTERNAL = 9,
} UscStatus;

typedef enum UscBasis {
  USC_BASIS_BARE = 0,
  USC_BASIS_SUPERMODE = 1,
} UscBasis;

/*
 Opaque system handle.
 */
typedef struct UscSystem UscSystem;

/*
 Result of a minimum-gap search.
 */
typedef struct UscGap {
  double omega_q_star;
  double gap_min;
  double omega_eff;
} UscGap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. Valid until the
 next call into this library on the same thread.
 */
const char *usc_last_error(void);

/*
 Library version string (static).
 */
const char *usc_version(void);

/*
 New system with default parameters for `n_cavities` (2 or 3); NULL on
 bad input.
 */
struct UscSystem *usc_system_new(uint32_t n_cavities);

/*
 # Safety
 `sys` must come from `usc_system_new` and not be freed twice. NULL is a no-op.
 */
void usc_system_free(struct UscSystem *sys);

/*
 Both qubits at `omega_q`.

 # Safety
 `sys` must be a live handle.
 */
enum UscStatus usc_system_set_qubit_frequency(struct UscSystem *sys, double omega_q);

/*
 # Safety
 `sys` must be a live handle.
 */
enum UscStatus usc_system_set_coupling(struct UscSystem *sys, double g_abs);

/*
 # Safety
 `sys` must be a live handle.
 */
enum UscStatus usc_system_set_hopping(struct UscSystem *sys, double hopping);

/*
 # Safety
 `sys` must be a live handle.
 */
enum UscStatus usc_system_set_theta(struct UscSystem *sys, double theta);

/*
 Coupling phases; each must be 0 or pi.

 # Safety
 `sys` must be a live handle.
 */
enum UscStatus usc_system_set_phases(struct UscSystem *sys, double phi1, double phi2);

/*
 Central-cavity detuning (three-cavity systems).

 # Safety
 `sys` must be a live handle.
 */
enum UscStatus usc_system_set_delta(struct UscSystem *sys, double delta);

/*
 # Safety
 `sys` must be a live handle.
 */
enum UscStatus usc_system_set_n_max(struct UscSystem *sys, uint32_t n_max);

/*
 Lowest `n_levels` eigenfrequencies relative to the ground state, written
 to `out[0..n_levels]`.

 # Safety
 `sys` must be a live handle and `out` must hold `n_levels` doubles.
 */
enum UscStatus usc_spectrum_levels(const struct UscSystem *sys,
                                   enum UscBasis basis,
                                   size_t n_levels,
                                   double *out);

/*
 Minimum of the gap between levels `level_i < level_j` over qubit
 frequencies in [`lo`, `hi`], using `points` coarse samples (0 = default).

 # Safety
 `sys` must be a live handle and `out` a valid pointer.
 */
enum UscStatus usc_find_min_gap(const struct UscSystem *sys,
                                size_t level_i,
                                size_t level_j,
                                double lo,
                                double hi,
                                size_t points,
                                struct UscGap *out);

/*
 Vacuum Rabi period pi / (2 omega_eff).

 # Safety
 `out` must be a valid pointer.
 */
enum UscStatus usc_rabi_period(double omega_eff, double *out);

/*
 Run a config file or canonical scenario id, writing outputs under
 `out_dir` in the format the config asks for.

 # Safety
 `target` and `out_dir` must be NUL-terminated strings.
 */
enum UscStatus usc_run_scenario(const char *target, const char *out_dir, bool deterministic);

/*
 Newline-separated canonical scenario ids. Release with `usc_string_free`.
 */
char *usc_scenario_ids(void);

/*
 # Safety
 `s` must come from this library and not be freed twice. NULL is a no-op.
 */
void usc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* USC_ARRAY_H */
