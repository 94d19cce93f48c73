#ifndef OMBLOCK_H
#define OMBLOCK_H

/// C interface to the optomechanical photon-blockade library. All handles
/// are opaque; functions return 0 on success, 2 on configuration errors and
/// 3 on numerical failures, matching the CLI exit-code contract. Failure
/// details are retrievable per thread via omb_last_error(). Strings returned
/// as char* are heap copies owned by the caller; release them with
/// omb_string_free().

#include <stdint.h>

#if defined(_WIN32)
#define OMB_API __declspec(dllexport)
#else
#define OMB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define OMB_OK 0
#define OMB_ERR_CONFIG 2
#define OMB_ERR_NUMERIC 3

/// Parameter set handle: system parameters, truncation, classification
/// thresholds, and the sweep thread cap.
typedef struct omb_params omb_params;

/// Completed sweep handle.
typedef struct omb_sweep omb_sweep;

/// Completed multi-pump scan handle.
typedef struct omb_scan omb_scan;

/// One evaluated parameter point. `label` indexes omb_label_name.
typedef struct {
    double P1, P2, P3;
    double mean_n;
    double g2, g3;
    int label;
} omb_point;

OMB_API const char* omb_version(void);

/// Message of the most recent failure on this thread; empty if none.
OMB_API const char* omb_last_error(void);

OMB_API void omb_string_free(char* s);

/// Label name for omb_point.label ("None", "OnePB", "TwoPB", "PIT",
/// "SubPoisson", "SuperPoisson"); NULL when out of range.
OMB_API const char* omb_label_name(int label);

/// Fresh handle with the reference parameter set (g0 = 0.5, Omega = 0.01,
/// gamma_c = 0.3, gamma_m = 0.001, nbar = 0, in units of omega_m) and
/// truncation (6, 12, 8).
OMB_API omb_params* omb_params_new(void);
OMB_API void omb_params_free(omb_params* p);

/// Set a scalar by key. Keys: omega_m, delta_c, g0, G, Omega, gamma_c,
/// gamma_m, nbar_m, n_a, n_b, m_max, tau1, tau2, threads. Integer keys
/// truncate toward zero.
OMB_API int omb_params_set(omb_params* p, const char* key, double value);
OMB_API int omb_params_get(const omb_params* p, const char* key, double* out);

/// Load the system-parameter JSON schema (the eight scalar fields; unknown
/// keys rejected). Truncation and thresholds are not part of the schema.
OMB_API int omb_params_load_json(omb_params* p, const char* text);

/// Dump the eight system parameters as JSON; round-trips through
/// omb_params_load_json.
OMB_API char* omb_params_dump_json(const omb_params* p);

/// Evaluate one route ("analytic", "perturbative", "master") at the current
/// parameters.
OMB_API int omb_eval_point(const omb_params* p, const char* route, omb_point* out);

/// Resonance table CSV ("kind,m,delta_c"): single- and two-photon
/// resonance detunings with phonon sidebands.
OMB_API char* omb_resonance_csv(const omb_params* p);

/// Sweep `axis` ("delta_c" or "pump_G") over [from, to] with the given
/// number of grid points, evaluating the comma-separated route list at
/// every point. Per-point failures are recorded, not fatal.
OMB_API omb_sweep* omb_sweep_run(const omb_params* p, const char* axis, double from,
                         double to, int points, const char* routes);
OMB_API void omb_sweep_free(omb_sweep* s);

/// CSV body (header axis_name,axis_value,route,P1,P2,P3,mean_n,g2,g3,label;
/// 17 significant digits; failed points omitted).
OMB_API char* omb_sweep_csv(const omb_sweep* s);

/// Sidecar JSON: params, truncation, grid, solver settings, library
/// version, features, windows, per-point errors.
OMB_API char* omb_sweep_provenance(const omb_sweep* s);

OMB_API int omb_sweep_row_count(const omb_sweep* s);

/// Fetch row i. On success *error is NULL; for a failed point *error points
/// at a message owned by the handle and *out is zeroed. `route` receives a
/// static route name. Returns OMB_ERR_CONFIG when i is out of range.
OMB_API int omb_sweep_row(const omb_sweep* s, int i, double* axis_value,
                  const char** route, omb_point* out, const char** error);

OMB_API int omb_sweep_feature_count(const omb_sweep* s);

/// Feature i: local extremum of g2 (is_dip = 1 for minima) at the refined
/// axis location.
OMB_API int omb_sweep_feature(const omb_sweep* s, int i, const char** route,
                      int* is_dip, double* axis_value, double* g2);

OMB_API int omb_sweep_window_count(const omb_sweep* s);

/// Window i: maximal interval with g2 > 1 and g3 < 1, edges interpolated.
OMB_API int omb_sweep_window(const omb_sweep* s, int i, const char** route,
                     double* lo, double* hi);

/// Detuning scan over [from, to] evaluated at n_pumps pump strengths with
/// route `route`; pump_nb (optional, may be NULL) gives a per-pump phonon
/// cutoff. Reports detunings where one pump yields OnePB and another TwoPB.
OMB_API omb_scan* omb_scan_run(const omb_params* p, double from, double to,
                       int points, const double* pumps, const int* pump_nb,
                       int n_pumps, const char* route);
OMB_API void omb_scan_free(omb_scan* s);

OMB_API char* omb_scan_provenance(const omb_scan* s);

/// Sweep CSV for pump index k (same schema as omb_sweep_csv).
OMB_API char* omb_scan_pump_csv(const omb_scan* s, int k);

OMB_API int omb_scan_flagged_count(const omb_scan* s);

/// Flagged interval i: contiguous detuning range where OnePB and TwoPB
/// co-occur across pump values.
OMB_API int omb_scan_flagged(const omb_scan* s, int i, double* lo, double* hi);

/// Truncation ladder (4,8) -> (6,12) -> (8,24) at the current parameters;
/// writes a text table and sets *converged to 1 when the final step moves
/// g2 and g3 by less than 1%.
OMB_API int omb_convergence_run(const omb_params* p, const char* route, char** table,
                        int* converged);

/// Cross-route invariant suite. as_printed = 1 swaps in the uncorrected
/// three-photon closed form (negative control; the equivalence check must
/// then fail). Writes the pass/fail table and sets *all_pass.
OMB_API int omb_validate_run(uint64_t seed, int as_printed, char** table,
                     int* all_pass);

/// Solve the steady state at the current parameters and write the binary
/// state dump (JSON header line, then row-major little-endian
/// complex doubles) to path.
OMB_API int omb_state_dump(const omb_params* p, const char* path);

#ifdef __cplusplus
}
#endif

#endif
