#ifndef COUPLER_H
#define COUPLER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum CouplerStatus {
  COUPLER_STATUS_OK = 0,
  COUPLER_STATUS_VALIDATION = 1,
  COUPLER_STATUS_NUMERICAL = 2,
  COUPLER_STATUS_CAUSAL = 3,
  COUPLER_STATUS_NULL_POINTER = 4,
  COUPLER_STATUS_UTF8 = 5,
  COUPLER_STATUS_PANIC = 6,
} CouplerStatus;

typedef enum CouplerModel {
  COUPLER_MODEL_LINEAR = 0,
  COUPLER_MODEL_LUMPED = 1,
  COUPLER_MODEL_BOTH = 2,
} CouplerModel;

/**
 * A validated configuration.
 */
typedef struct CouplerConfig CouplerConfig;

/**
 * A simulated trajectory.
 */
typedef struct CouplerTrajectory CouplerTrajectory;

typedef struct CouplerLinear {
  double a12_c_per_m;
  double zeta;
  double a34_n_per_c;
  double gamma_n_per_m;
  double gamma_reverse_n_per_m;
  /**
   * NaN when the traps differ in frequency or the ions in mass.
   */
  double g_rad_per_s;
  double t_swap_s;
} CouplerLinear;

typedef struct CouplerLumpedIon {
  double c_hyb_a_f;
  double l_hyb_a_h;
  double c_hyb_b_f;
  double l_hyb_b_h;
  double eta;
  double c_hyb_b_actual_f;
  double plate_separation_m;
  double oscillation_energy_j;
} CouplerLumpedIon;

typedef struct CouplerLumped {
  struct CouplerLumpedIon ion1;
  struct CouplerLumpedIon ion2;
  double c_conductor_f;
  double gamma_plate_exact_n_per_m;
  double gamma_plate_large_c_n_per_m;
  double gamma_plate_geometric_n_per_m;
} CouplerLumped;

typedef struct CouplerSample {
  double t_s;
  double x1_m;
  double v1_mps;
  double x2_m;
  double v2_mps;
  double e1_j;
  double e2_j;
  double etot_j;
} CouplerSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *coupler_version(void);

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *coupler_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void coupler_string_free(char *s);

/**
 * The built-in example configuration. Never null.
 */
struct CouplerConfig *coupler_config_example(void);

/**
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` a writable pointer.
 */
enum CouplerStatus coupler_config_from_json(const char *json, struct CouplerConfig **out_config);

/**
 * # Safety
 * `path` must be a valid NUL-terminated string; `out` a writable pointer.
 */
enum CouplerStatus coupler_config_load(const char *path, struct CouplerConfig **out_config);

/**
 * # Safety
 * `config` must come from this library and not have been freed.
 */
void coupler_config_free(struct CouplerConfig *config);

/**
 * # Safety
 * `config` must be a live handle; `out` a writable pointer.
 */
enum CouplerStatus coupler_linear(const struct CouplerConfig *config,
                                  struct CouplerLinear *out_linear);

/**
 * # Safety
 * `config` must be a live handle; `out` a writable pointer.
 */
enum CouplerStatus coupler_lumped(const struct CouplerConfig *config,
                                  struct CouplerLumped *out_lumped);

/**
 * Full report as JSON (sorted keys, no timestamp). Free the result with
 * [`coupler_string_free`].
 *
 * # Safety
 * `config` must be a live handle; `out_json` a writable pointer.
 */
enum CouplerStatus coupler_report_json(const struct CouplerConfig *config,
                                       enum CouplerModel model,
                                       char **out_json);

/**
 * Charge induced on a grounded disk per unit ion displacement, C/m.
 *
 * # Safety
 * `out_value` must be a writable pointer.
 */
enum CouplerStatus coupler_a12(double q, double r, double d, double *out_value);

/**
 * Image charge inside a window of radius `r` under a charge `q` at height `d`.
 *
 * # Safety
 * `out_value` must be a writable pointer.
 */
enum CouplerStatus coupler_induced_charge_plane(double q, double d, double r, double *out_value);

/**
 * Total charge on a grounded finite disk from the ring boundary-element solver.
 *
 * # Safety
 * `out_value` must be a writable pointer.
 */
enum CouplerStatus coupler_induced_charge_bem(double q,
                                              double d,
                                              double radius,
                                              size_t rings,
                                              double *out_value);

/**
 * Two identical oscillators, ion 1 displaced by `amplitude` at rest.
 *
 * # Safety
 * `out_trajectory` must be a writable pointer.
 */
enum CouplerStatus coupler_simulate(double mass_kg,
                                    double angular_frequency,
                                    double gamma_n_per_m,
                                    double amplitude_m,
                                    double duration_s,
                                    double dt_s,
                                    size_t record_stride,
                                    struct CouplerTrajectory **out_trajectory);

/**
 * Number of recorded samples; 0 for a null handle.
 *
 * # Safety
 * `trajectory` must be null or a live handle.
 */
size_t coupler_trajectory_len(const struct CouplerTrajectory *trajectory);

/**
 * # Safety
 * `trajectory` must be a live handle; `out_sample` a writable pointer.
 */
enum CouplerStatus coupler_trajectory_sample(const struct CouplerTrajectory *trajectory,
                                             size_t index,
                                             struct CouplerSample *out_sample);

/**
 * # Safety
 * `trajectory` must be a live handle; `out_value` a writable pointer.
 */
enum CouplerStatus coupler_trajectory_exchange_time(const struct CouplerTrajectory *trajectory,
                                                    double *out_value);

/**
 * # Safety
 * `trajectory` must come from this library and not have been freed.
 */
void coupler_trajectory_free(struct CouplerTrajectory *trajectory);

/**
 * Checks a derivation script. Returns `COUPLER_STATUS_CAUSAL` when a claim
 * is not derivable and `COUPLER_STATUS_VALIDATION` for malformed scripts.
 * `out_report` (optional) receives the text verdict report.
 *
 * # Safety
 * `script` must be a valid NUL-terminated string; `out_report` null or writable.
 */
enum CouplerStatus coupler_causal_check(const char *script, char **out_report);

/**
 * Composes two relations; `out_result` receives the conclusion (or the
 * reason there is none).
 *
 * # Safety
 * Both relations must be valid NUL-terminated strings; `out_result` writable.
 */
enum CouplerStatus coupler_causal_compose(const char *first, const char *second, char **out_result);

/**
 * Success flag helper for callers that only need a boolean.
 */
int coupler_status_is_ok(enum CouplerStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COUPLER_H */
