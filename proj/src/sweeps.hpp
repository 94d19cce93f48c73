#pragma once

#include <string>
#include <utility>
#include <vector>

#include "correlation.hpp"
#include "fock.hpp"
#include "params.hpp"

namespace omb {

enum class SweepAxis { delta_c, pump_G };

const char* axis_name(SweepAxis a);

// One-dimensional grid over the driving detuning or the mechanical pump.
struct SweepSpec {
    SweepAxis axis = SweepAxis::delta_c;
    double from = -1.0;
    double to = 1.0;
    int points = 401;
    std::vector<Route> routes{Route::analytic, Route::master};
    SystemParams base;
    Truncation trunc;
    Thresholds thresholds;
    int threads = 0;  // 0 = available parallelism
};

void validate(const SweepSpec& spec);

// Evaluate one route at one parameter point. The analytic and amplitude
// routes require the weak-drive regime (Omega < gamma_c).
CorrelationPoint evaluate_route(const SystemParams& p, const Truncation& t,
                                Route route, const Thresholds& th = {});

struct SweepRow {
    int index = 0;
    double axis_value = 0.0;
    Route route = Route::analytic;
    bool ok = false;
    CorrelationPoint point;
    std::string error;  // set when !ok
};

// Local extremum of g2, refined by a parabola through the three
// neighboring samples.
struct Feature {
    Route route;
    bool is_dip;        // false = peak
    double axis_value;  // refined location
    double g2;          // refined value
};

// Maximal interval where g2 > 1 and g3 < 1 simultaneously; edges linearly
// interpolated to the crossing of min(g2 - 1, 1 - g3).
struct Window {
    Route route;
    double lo, hi;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;  // grid-major, routes in requested order
    std::vector<Feature> features;
    std::vector<Window> windows;
};

// Run every requested route at every grid point with a work pool. Per-point
// failures are recorded on the row, never fatal; the master route reuses the
// operator split L(x) = L0 + x * L_axis, which is exact because the axis
// parameter enters the Hamiltonian linearly and no dissipator depends on it.
SweepResult run_sweep(const SweepSpec& spec);

std::vector<Feature> find_features(const SweepResult& r, Route route);
std::vector<Window> find_windows(const SweepResult& r, Route route);

// CSV with the fixed header
//   axis_name,axis_value,route,P1,P2,P3,mean_n,g2,g3,label
// and 17 significant digits. Failed rows are omitted here and listed in the
// provenance JSON instead.
std::string to_csv(const SweepResult& r);

// Sidecar JSON: params, truncation, grid, thresholds, solver settings,
// library version, detected features/windows, and per-point errors.
std::string provenance_json(const SweepResult& r);

// Grid over the detuning evaluated at several pump strengths at once, used
// to locate detunings where different pumps put the cavity in different
// blockade regimes.
struct ScanSpec {
    SystemParams base;
    Truncation trunc;
    std::vector<double> pumps;
    // Optional per-pump phonon cutoff (strong pumps displace the mechanics
    // further and need more levels); empty = trunc.n_b everywhere.
    std::vector<int> pump_nb;
    double from = 0.0;
    double to = 1.5;
    int points = 151;
    Route route = Route::master;
    Thresholds thresholds;
    int threads = 0;
};

void validate(const ScanSpec& spec);

struct ScanRow {
    double delta_c = 0.0;
    std::vector<double> one_pb;  // pump values labeled OnePB here
    std::vector<double> two_pb;  // pump values labeled TwoPB here
    bool flagged = false;        // both labels occur across pumps
};

struct ScanReport {
    ScanSpec spec;
    std::vector<SweepResult> per_pump;  // one detuning sweep per pump value
    std::vector<ScanRow> rows;
    // Maximal contiguous flagged runs, as [delta_c_lo, delta_c_hi].
    std::vector<std::pair<double, double>> flagged_intervals;
};

ScanReport simultaneous_blockade_scan(const ScanSpec& spec);

std::string scan_provenance_json(const ScanReport& report);

// Truncation ladder (4,8) -> (6,12) -> (8,24); the amplitude-expansion
// cutoff follows the phonon truncation. `converged` means the final step
// moved g2 and g3 by less than 1% each.
struct ConvergenceStep {
    Truncation trunc;
    CorrelationPoint point;
    double g2_delta = 0.0;  // relative change against the previous step
    double g3_delta = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceStep> steps;
    bool converged = false;
};

ConvergenceReport convergence_ladder(const SystemParams& p, Route route,
                                     const Thresholds& th = {});

}  // namespace omb
