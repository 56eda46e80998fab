#ifndef FLUXLDE_H
#define FLUXLDE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible API call.
 */
typedef enum FluxldeStatus {
  /**
   * Success.
   */
  Ok = 0,
  /**
   * A required pointer argument was null.
   */
  NullPointer = 1,
  /**
   * Arguments were rejected before any computation ran.
   */
  InvalidArgument = 2,
  /**
   * The computation itself failed; see `fluxlde_last_error`.
   */
  ComputeError = 3,
} FluxldeStatus;

/**
 * Microwave-protocol model selector.
 */
typedef enum FluxldeMwModel {
  /**
   * Full driven chain in the lab frame.
   */
  Full = 0,
  /**
   * Effective XX model in the rotating frame.
   */
  Effective = 1,
} FluxldeMwModel;

/**
 * Opaque dc-protocol chain configuration.
 */
typedef struct FluxldeDcConfig FluxldeDcConfig;

/**
 * Opaque microwave-protocol chain configuration.
 */
typedef struct FluxldeMwConfig FluxldeMwConfig;

/**
 * Opaque evolution trace (sampled fidelity/concurrence time series).
 */
typedef struct FluxldeTrace FluxldeTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread. The pointer is
 * valid until the next failing call on the same thread; do not free it.
 */
const char *fluxlde_last_error(void);

/**
 * Creates a dc chain configuration. All frequencies are linear GHz.
 * Returns a handle through `out`; free with `fluxlde_dc_config_free`.
 */
enum FluxldeStatus fluxlde_dc_config_new(uintptr_t n_sites,
                                         double j_ghz,
                                         double lambda,
                                         double lambda_h,
                                         double delta_ghz,
                                         double eps0_ghz,
                                         double ramp_ghz,
                                         struct FluxldeDcConfig **out);

/**
 * Reference dc operating point (four-site chain, Δ = 4.5, ε₀ = 20, J = 5 GHz, λ = 0.2, λ_h = 0.02, r = 0.04 GHz).
 */
enum FluxldeStatus fluxlde_dc_config_default(struct FluxldeDcConfig **out);

/**
 * Frees a dc configuration handle (null is a no-op).
 */
void fluxlde_dc_config_free(struct FluxldeDcConfig *cfg);

/**
 * Creates a microwave chain configuration (resonant drive, default phases).
 */
enum FluxldeStatus fluxlde_mw_config_new(uintptr_t n_sites,
                                         double j_ghz,
                                         double lambda,
                                         double delta_ghz,
                                         double omega0_ghz,
                                         double ramp_ghz,
                                         struct FluxldeMwConfig **out);

/**
 * Reference mw operating point (four-site chain, Δ = 10, Ω₀ = 2, J = 1 GHz, λ = 0.2, r = 0.02 GHz, resonant drive).
 */
enum FluxldeStatus fluxlde_mw_config_default(struct FluxldeMwConfig **out);

/**
 * Frees a microwave configuration handle (null is a no-op).
 */
void fluxlde_mw_config_free(struct FluxldeMwConfig *cfg);

/**
 * Ground-state gap (linear GHz) and end-to-end concurrence of the dc chain
 * at bias amplitude `eps_ghz`. Either out-pointer may be null to skip it;
 * concurrence is NaN at degenerate points.
 */
enum FluxldeStatus fluxlde_dc_ground_properties(const struct FluxldeDcConfig *cfg,
                                                double eps_ghz,
                                                double *out_gap_ghz,
                                                double *out_concurrence);

/**
 * Ground-state gap (linear GHz) and end-to-end concurrence of the effective
 * XX chain at drive amplitude `omega_drive_ghz`.
 */
enum FluxldeStatus fluxlde_mw_ground_properties(const struct FluxldeMwConfig *cfg,
                                                double omega_drive_ghz,
                                                double *out_gap_ghz,
                                                double *out_concurrence);

/**
 * Runs the dc ramp protocol for `t_final_ns`, sampling `n_samples` points.
 * On success `out` receives a trace handle; free with `fluxlde_trace_free`.
 */
enum FluxldeStatus fluxlde_run_dc(const struct FluxldeDcConfig *cfg,
                                  double t_final_ns,
                                  uintptr_t n_samples,
                                  struct FluxldeTrace **out);

/**
 * Runs the microwave ramp protocol with the chosen model.
 */
enum FluxldeStatus fluxlde_run_mw(const struct FluxldeMwConfig *cfg,
                                  double t_final_ns,
                                  uintptr_t n_samples,
                                  enum FluxldeMwModel model,
                                  struct FluxldeTrace **out);

/**
 * Number of sampled rows in a trace.
 */
uintptr_t fluxlde_trace_len(const struct FluxldeTrace *trace);

/**
 * Reads row `index` of a trace. Any out-pointer may be null to skip that
 * column. Fidelity is NaN at degenerate instantaneous ground states.
 */
enum FluxldeStatus fluxlde_trace_row(const struct FluxldeTrace *trace,
                                     uintptr_t index,
                                     double *out_t_ns,
                                     double *out_control_ghz,
                                     double *out_fidelity,
                                     double *out_concurrence,
                                     double *out_norm_error);

/**
 * Frees a trace handle (null is a no-op).
 */
void fluxlde_trace_free(struct FluxldeTrace *trace);

/**
 * Wootters concurrence of a two-qubit density matrix given as two 16-entry
 * row-major arrays (real and imaginary parts). The matrix must be
 * Hermitian, unit-trace, and positive semidefinite within validation
 * tolerance.
 */
enum FluxldeStatus fluxlde_concurrence(const double *rho_re, const double *rho_im, double *out);

/**
 * Dispersive-readout timing: measurement time at quality factor `q` and the
 * optimal integer quality factor over `[q_min, q_max]`. Either out-pointer
 * may be null to skip that estimate.
 */
enum FluxldeStatus fluxlde_readout_timing(double lq_ph,
                                          double iq_ua,
                                          double kappa,
                                          double tn_k,
                                          double omega_r_ghz,
                                          double q,
                                          uint32_t q_min,
                                          uint32_t q_max,
                                          double *out_t_meas_ns,
                                          uint32_t *out_optimal_q);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLUXLDE_H */
