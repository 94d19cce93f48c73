#include "sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include <json.hpp>

#include "analytic.hpp"
#include "errors.hpp"
#include "lindblad.hpp"
#include "perturbative.hpp"
#include "version.hpp"

namespace omb {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

SystemParams at_axis(const SweepSpec& spec, double x) {
    SystemParams p = spec.base;
    if (spec.axis == SweepAxis::delta_c)
        p.delta_c = x;
    else
        p.G = x;
    return p;
}

int resolve_threads(int requested, int jobs) {
    int n = requested > 0 ? requested
                          : int(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    return std::min(n, std::max(jobs, 1));
}

// The axis parameter enters the Hamiltonian linearly and never touches a
// dissipator, so the generator is affine along the sweep:
// L(x) = L(0) + x [L(1) - L(0)].
struct MasterSplit {
    bool active = false;
    SparseOperator L0, Laxis;
    Truncation trunc;
};

MasterSplit build_split(const SweepSpec& spec) {
    MasterSplit s;
    if (std::find(spec.routes.begin(), spec.routes.end(), Route::master) ==
        spec.routes.end())
        return s;
    s.active = true;
    s.trunc = spec.trunc;
    s.L0 = liouvillian(at_axis(spec, 0.0), spec.trunc).data;
    s.Laxis = liouvillian(at_axis(spec, 1.0), spec.trunc).data;
    s.Laxis -= s.L0;
    return s;
}

CorrelationPoint master_from_split(const MasterSplit& s,
                                   const SystemParams& p, double x,
                                   const Thresholds& th) {
    Superoperator L;
    L.data = s.L0 + std::complex<double>(x, 0.0) * s.Laxis;
    L.params = p;
    L.trunc = s.trunc;
    return correlations_from_state(steady_state(L), th);
}

struct Series {
    std::vector<double> x, g2, g3;
    std::vector<char> ok;
};

Series extract(const SweepResult& r, Route route) {
    const int n = r.spec.points;
    Series s;
    s.x.assign(n, 0.0);
    s.g2.assign(n, 0.0);
    s.g3.assign(n, 0.0);
    s.ok.assign(n, 0);
    for (const SweepRow& row : r.rows) {
        if (row.route != route) continue;
        s.x[row.index] = row.axis_value;
        if (row.ok) {
            s.ok[row.index] = 1;
            s.g2[row.index] = row.point.g2;
            s.g3[row.index] = row.point.g3;
        }
    }
    return s;
}

}  // namespace

const char* axis_name(SweepAxis a) {
    return a == SweepAxis::delta_c ? "delta_c" : "pump_G";
}

void validate(const SweepSpec& spec) {
    validate(spec.base);
    validate(spec.trunc);
    if (spec.points < 2) throw ConfigError("sweep needs at least 2 points");
    if (!std::isfinite(spec.from) || !std::isfinite(spec.to) ||
        !(spec.from < spec.to))
        throw ConfigError("sweep range must satisfy from < to");
    if (spec.routes.empty()) throw ConfigError("no routes requested");
    if (spec.threads < 0) throw ConfigError("thread count cannot be negative");
}

CorrelationPoint evaluate_route(const SystemParams& p, const Truncation& t,
                                Route route, const Thresholds& th) {
    if (route != Route::master && !weak_drive_ok(p))
        throw ConfigError(
            "drive is not weak (Omega >= gamma_c); the analytic and "
            "amplitude routes are outside their regime");
    switch (route) {
        case Route::analytic:
            return analytic_point(p, false, th);
        case Route::perturbative:
            return perturbative_point(p, t.m_max, th);
        case Route::master:
        default:
            return master_point(p, t, th);
    }
}

SweepResult run_sweep(const SweepSpec& spec) {
    validate(spec);
    const int n = spec.points;
    const int nr = int(spec.routes.size());
    const double h = (spec.to - spec.from) / double(n - 1);

    SweepResult result;
    result.spec = spec;
    result.rows.resize(size_t(n) * size_t(nr));

    const MasterSplit split = build_split(spec);

    std::atomic<int> next{0};
    const auto worker = [&]() {
        for (int i; (i = next.fetch_add(1)) < n;) {
            const double x = spec.from + h * double(i);
            const SystemParams p = at_axis(spec, x);
            for (int j = 0; j < nr; ++j) {
                SweepRow& row = result.rows[size_t(i) * nr + j];
                row.index = i;
                row.axis_value = x;
                row.route = spec.routes[j];
                try {
                    row.point =
                        row.route == Route::master && split.active
                            ? master_from_split(split, p, x, spec.thresholds)
                            : evaluate_route(p, spec.trunc, row.route,
                                             spec.thresholds);
                    row.ok = true;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
            }
        }
    };

    const int nthreads = resolve_threads(spec.threads, n);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(size_t(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (Route route : spec.routes) {
        const auto f = find_features(result, route);
        result.features.insert(result.features.end(), f.begin(), f.end());
        const auto w = find_windows(result, route);
        result.windows.insert(result.windows.end(), w.begin(), w.end());
    }
    return result;
}

std::vector<Feature> find_features(const SweepResult& r, Route route) {
    const Series s = extract(r, route);
    const int n = int(s.x.size());
    std::vector<Feature> out;
    for (int i = 1; i + 1 < n; ++i) {
        if (!(s.ok[i - 1] && s.ok[i] && s.ok[i + 1])) continue;
        const double a = s.g2[i - 1], b = s.g2[i], c = s.g2[i + 1];
        const bool dip = b < a && b < c;
        const bool peak = b > a && b > c;
        if (!dip && !peak) continue;

        const double h = 0.5 * (s.x[i + 1] - s.x[i - 1]);
        const double curv = a - 2.0 * b + c;
        double t = 0.0;
        if (curv != 0.0) t = 0.5 * (a - c) / curv;
        t = std::clamp(t, -1.0, 1.0);
        out.push_back({route, dip, s.x[i] + t * h, b - 0.25 * t * (a - c)});
    }
    return out;
}

std::vector<Window> find_windows(const SweepResult& r, Route route) {
    const Series s = extract(r, route);
    const int n = int(s.x.size());

    const auto margin = [&](int i) {
        return std::min(s.g2[i] - 1.0, 1.0 - s.g3[i]);
    };
    const auto inside = [&](int i) { return s.ok[i] && margin(i) > 0.0; };
    const auto cross = [&](int lo, int hi) {
        // Zero of the linear interpolant of the margin between grid
        // neighbors lo and hi; falls back to the inside point when the
        // outside neighbor failed.
        const int out_i = inside(lo) ? hi : lo;
        const int in_i = inside(lo) ? lo : hi;
        if (!s.ok[out_i]) return s.x[in_i];
        const double c0 = margin(lo), c1 = margin(hi);
        if (c0 == c1) return s.x[in_i];
        return s.x[lo] + c0 * (s.x[hi] - s.x[lo]) / (c0 - c1);
    };

    std::vector<Window> out;
    bool open = false;
    double lo = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!open && inside(i)) {
            open = true;
            lo = i == 0 ? s.x[0] : cross(i - 1, i);
        } else if (open && !inside(i)) {
            open = false;
            out.push_back({route, lo, cross(i - 1, i)});
        }
    }
    if (open) out.push_back({route, lo, s.x[n - 1]});
    return out;
}

std::string to_csv(const SweepResult& r) {
    std::string csv =
        "axis_name,axis_value,route,P1,P2,P3,mean_n,g2,g3,label\n";
    const char* axis = axis_name(r.spec.axis);
    for (const SweepRow& row : r.rows) {
        if (!row.ok) continue;
        const CorrelationPoint& p = row.point;
        csv += axis;
        csv += ',';
        csv += fmt17(row.axis_value);
        csv += ',';
        csv += route_name(row.route);
        csv += ',';
        csv += fmt17(p.P1) + ',' + fmt17(p.P2) + ',' + fmt17(p.P3) + ',' +
               fmt17(p.mean_n) + ',' + fmt17(p.g2) + ',' + fmt17(p.g3) + ',';
        csv += label_name(p.label);
        csv += '\n';
    }
    return csv;
}

namespace {

nlohmann::json solver_settings() {
    return {{"iterative", "bicgstab"},
            {"preconditioner", "ilut"},
            {"ilut_droptol", 1e-5},
            {"ilut_fillfactor", 20},
            {"iterative_tolerance", 1e-13},
            {"max_iterations", 400},
            {"residual_accept", 1e-10},
            {"fallbacks", {"sparse-lu", "relaxation"}}};
}

nlohmann::json spec_json(const SweepSpec& spec) {
    nlohmann::json j;
    j["library_version"] = kVersion;
    j["params"] = nlohmann::json::parse(params_to_json(spec.base));
    j["truncation"] = {{"n_a", spec.trunc.n_a},
                       {"n_b", spec.trunc.n_b},
                       {"m_max", spec.trunc.m_max}};
    j["axis"] = axis_name(spec.axis);
    j["from"] = spec.from;
    j["to"] = spec.to;
    j["points"] = spec.points;
    nlohmann::json routes = nlohmann::json::array();
    for (Route route : spec.routes) routes.push_back(route_name(route));
    j["routes"] = routes;
    j["thresholds"] = {{"tau1", spec.thresholds.tau1},
                       {"tau2", spec.thresholds.tau2}};
    j["solver"] = solver_settings();
    return j;
}

nlohmann::json result_json(const SweepResult& r) {
    nlohmann::json j = spec_json(r.spec);
    nlohmann::json features = nlohmann::json::array();
    for (const Feature& f : r.features)
        features.push_back({{"route", route_name(f.route)},
                            {"kind", f.is_dip ? "dip" : "peak"},
                            {"axis_value", f.axis_value},
                            {"g2", f.g2}});
    j["features"] = features;
    nlohmann::json windows = nlohmann::json::array();
    for (const Window& w : r.windows)
        windows.push_back(
            {{"route", route_name(w.route)}, {"lo", w.lo}, {"hi", w.hi}});
    j["windows"] = windows;
    nlohmann::json errors = nlohmann::json::array();
    for (const SweepRow& row : r.rows)
        if (!row.ok)
            errors.push_back({{"index", row.index},
                              {"axis_value", row.axis_value},
                              {"route", route_name(row.route)},
                              {"message", row.error}});
    j["errors"] = errors;
    return j;
}

}  // namespace

std::string provenance_json(const SweepResult& r) {
    return result_json(r).dump(2);
}

void validate(const ScanSpec& spec) {
    validate(spec.base);
    validate(spec.trunc);
    if (spec.pumps.empty()) throw ConfigError("scan needs pump values");
    for (double g : spec.pumps)
        if (!std::isfinite(g) || g < 0.0)
            throw ConfigError("pump values must be finite and nonnegative");
    if (!spec.pump_nb.empty() && spec.pump_nb.size() != spec.pumps.size())
        throw ConfigError("pump_nb must match the pump list in length");
    for (int nb : spec.pump_nb)
        if (nb < 2) throw ConfigError("pump_nb entries must be at least 2");
    if (spec.points < 2) throw ConfigError("scan needs at least 2 points");
    if (!std::isfinite(spec.from) || !std::isfinite(spec.to) ||
        !(spec.from < spec.to))
        throw ConfigError("scan range must satisfy from < to");
}

ScanReport simultaneous_blockade_scan(const ScanSpec& spec) {
    validate(spec);
    ScanReport report;
    report.spec = spec;

    for (size_t k = 0; k < spec.pumps.size(); ++k) {
        SweepSpec ss;
        ss.axis = SweepAxis::delta_c;
        ss.from = spec.from;
        ss.to = spec.to;
        ss.points = spec.points;
        ss.routes = {spec.route};
        ss.base = spec.base;
        ss.base.G = spec.pumps[k];
        ss.trunc = spec.trunc;
        if (!spec.pump_nb.empty()) ss.trunc.n_b = spec.pump_nb[k];
        ss.thresholds = spec.thresholds;
        ss.threads = spec.threads;
        report.per_pump.push_back(run_sweep(ss));
    }

    report.rows.resize(size_t(spec.points));
    for (int i = 0; i < spec.points; ++i) {
        ScanRow& row = report.rows[size_t(i)];
        row.delta_c = report.per_pump.front().rows[size_t(i)].axis_value;
        for (size_t k = 0; k < spec.pumps.size(); ++k) {
            const SweepRow& cell = report.per_pump[k].rows[size_t(i)];
            if (!cell.ok) continue;
            if (cell.point.label == Label::one_pb)
                row.one_pb.push_back(spec.pumps[k]);
            else if (cell.point.label == Label::two_pb)
                row.two_pb.push_back(spec.pumps[k]);
        }
        row.flagged = !row.one_pb.empty() && !row.two_pb.empty();
    }

    bool open = false;
    double lo = 0.0;
    for (size_t i = 0; i < report.rows.size(); ++i) {
        if (!open && report.rows[i].flagged) {
            open = true;
            lo = report.rows[i].delta_c;
        } else if (open && !report.rows[i].flagged) {
            open = false;
            report.flagged_intervals.emplace_back(lo,
                                                  report.rows[i - 1].delta_c);
        }
    }
    if (open)
        report.flagged_intervals.emplace_back(lo, report.rows.back().delta_c);
    return report;
}

ConvergenceReport convergence_ladder(const SystemParams& p, Route route,
                                     const Thresholds& th) {
    ConvergenceReport report;
    for (const Truncation t : {Truncation{4, 8, 8}, Truncation{6, 12, 12},
                               Truncation{8, 24, 24}}) {
        ConvergenceStep step;
        step.trunc = t;
        step.point = evaluate_route(p, t, route, th);
        if (!report.steps.empty()) {
            const CorrelationPoint& prev = report.steps.back().point;
            step.g2_delta = std::abs(step.point.g2 - prev.g2) /
                            std::max(std::abs(prev.g2), 1e-300);
            step.g3_delta = std::abs(step.point.g3 - prev.g3) /
                            std::max(std::abs(prev.g3), 1e-300);
        }
        report.steps.push_back(std::move(step));
    }
    report.converged = report.steps.back().g2_delta < 0.01 &&
                       report.steps.back().g3_delta < 0.01;
    return report;
}

std::string scan_provenance_json(const ScanReport& report) {
    const ScanSpec& spec = report.spec;
    nlohmann::json j;
    j["library_version"] = kVersion;
    j["params"] = nlohmann::json::parse(params_to_json(spec.base));
    j["truncation"] = {{"n_a", spec.trunc.n_a},
                       {"n_b", spec.trunc.n_b},
                       {"m_max", spec.trunc.m_max}};
    j["pumps"] = spec.pumps;
    if (!spec.pump_nb.empty()) j["pump_nb"] = spec.pump_nb;
    j["from"] = spec.from;
    j["to"] = spec.to;
    j["points"] = spec.points;
    j["route"] = route_name(spec.route);
    j["thresholds"] = {{"tau1", spec.thresholds.tau1},
                       {"tau2", spec.thresholds.tau2}};
    j["solver"] = solver_settings();

    nlohmann::json rows = nlohmann::json::array();
    for (const ScanRow& row : report.rows)
        rows.push_back({{"delta_c", row.delta_c},
                        {"one_pb", row.one_pb},
                        {"two_pb", row.two_pb},
                        {"flagged", row.flagged}});
    j["rows"] = rows;

    nlohmann::json flagged = nlohmann::json::array();
    for (const auto& [a, b] : report.flagged_intervals)
        flagged.push_back({{"lo", a}, {"hi", b}});
    j["flagged_intervals"] = flagged;

    nlohmann::json errors = nlohmann::json::array();
    for (size_t k = 0; k < report.per_pump.size(); ++k)
        for (const SweepRow& row : report.per_pump[k].rows)
            if (!row.ok)
                errors.push_back({{"pump", spec.pumps[k]},
                                  {"delta_c", row.axis_value},
                                  {"message", row.error}});
    j["errors"] = errors;
    return j.dump(2);
}

}  // namespace omb
