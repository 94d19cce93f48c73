#include "omblock.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "checks.hpp"
#include "errors.hpp"
#include "lindblad.hpp"
#include "params.hpp"
#include "spectrum.hpp"
#include "sweeps.hpp"
#include "version.hpp"

struct omb_params {
    omb::SystemParams p;
    omb::Truncation t;
    omb::Thresholds th;
    int threads = 0;
};

struct omb_sweep {
    omb::SweepResult r;
};

struct omb_scan {
    omb::ScanReport r;
};

namespace {

thread_local std::string t_last_error;

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int set_error(const std::exception& e, int code) {
    t_last_error = e.what();
    return code;
}

// Run f under the exception-to-status mapping shared by every entry point.
template <typename F>
int guarded(F&& f) {
    try {
        f();
        return OMB_OK;
    } catch (const omb::ConfigError& e) {
        return set_error(e, OMB_ERR_CONFIG);
    } catch (const std::exception& e) {
        return set_error(e, OMB_ERR_NUMERIC);
    }
}

omb::Route parse_route(const char* name) {
    const std::string r = name ? name : "";
    if (r == "analytic") return omb::Route::analytic;
    if (r == "perturbative") return omb::Route::perturbative;
    if (r == "master") return omb::Route::master;
    throw omb::ConfigError("unknown route: '" + r +
                           "' (expected analytic, perturbative or master)");
}

std::vector<omb::Route> parse_routes(const char* csv) {
    std::vector<omb::Route> out;
    std::string text = csv ? csv : "";
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t comma = text.find(',', pos);
        const std::string item =
            text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!item.empty()) out.push_back(parse_route(item.c_str()));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw omb::ConfigError("empty route list");
    return out;
}

omb::SweepAxis parse_axis(const char* name) {
    const std::string a = name ? name : "";
    if (a == "delta_c") return omb::SweepAxis::delta_c;
    if (a == "pump_G") return omb::SweepAxis::pump_G;
    throw omb::ConfigError("unknown axis: '" + a +
                           "' (expected delta_c or pump_G)");
}

void fill(const omb::CorrelationPoint& cp, omb_point* out) {
    out->P1 = cp.P1;
    out->P2 = cp.P2;
    out->P3 = cp.P3;
    out->mean_n = cp.mean_n;
    out->g2 = cp.g2;
    out->g3 = cp.g3;
    out->label = int(cp.label);
}

double* scalar_slot(omb_params* p, const std::string& key) {
    if (key == "omega_m") return &p->p.omega_m;
    if (key == "delta_c") return &p->p.delta_c;
    if (key == "g0") return &p->p.g0;
    if (key == "G") return &p->p.G;
    if (key == "Omega") return &p->p.Omega;
    if (key == "gamma_c") return &p->p.gamma_c;
    if (key == "gamma_m") return &p->p.gamma_m;
    if (key == "nbar_m") return &p->p.nbar_m;
    if (key == "tau1") return &p->th.tau1;
    if (key == "tau2") return &p->th.tau2;
    return nullptr;
}

int* int_slot(omb_params* p, const std::string& key) {
    if (key == "n_a") return &p->t.n_a;
    if (key == "n_b") return &p->t.n_b;
    if (key == "m_max") return &p->t.m_max;
    if (key == "threads") return &p->threads;
    return nullptr;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

extern "C" {

const char* omb_version(void) { return omb::kVersion; }

const char* omb_last_error(void) { return t_last_error.c_str(); }

void omb_string_free(char* s) { std::free(s); }

const char* omb_label_name(int label) {
    if (label < 0 || label > int(omb::Label::super_poisson)) return nullptr;
    return omb::label_name(omb::Label(label));
}

omb_params* omb_params_new(void) { return new (std::nothrow) omb_params; }

void omb_params_free(omb_params* p) { delete p; }

int omb_params_set(omb_params* p, const char* key, double value) {
    return guarded([&] {
        if (!p || !key) throw omb::ConfigError("null argument");
        if (double* slot = scalar_slot(p, key)) {
            *slot = value;
            return;
        }
        if (int* slot = int_slot(p, key)) {
            *slot = int(value);
            return;
        }
        throw omb::ConfigError(std::string("unknown parameter key: ") + key);
    });
}

int omb_params_get(const omb_params* p, const char* key, double* out) {
    return guarded([&] {
        if (!p || !key || !out) throw omb::ConfigError("null argument");
        omb_params* mut = const_cast<omb_params*>(p);
        if (const double* slot = scalar_slot(mut, key)) {
            *out = *slot;
            return;
        }
        if (const int* slot = int_slot(mut, key)) {
            *out = double(*slot);
            return;
        }
        throw omb::ConfigError(std::string("unknown parameter key: ") + key);
    });
}

int omb_params_load_json(omb_params* p, const char* text) {
    return guarded([&] {
        if (!p || !text) throw omb::ConfigError("null argument");
        p->p = omb::params_from_json(text);
    });
}

char* omb_params_dump_json(const omb_params* p) {
    if (!p) {
        t_last_error = "null argument";
        return nullptr;
    }
    return dup(omb::params_to_json(p->p));
}

int omb_eval_point(const omb_params* p, const char* route, omb_point* out) {
    return guarded([&] {
        if (!p || !out) throw omb::ConfigError("null argument");
        fill(omb::evaluate_route(p->p, p->t, parse_route(route), p->th), out);
    });
}

char* omb_resonance_csv(const omb_params* p) {
    if (!p) {
        t_last_error = "null argument";
        return nullptr;
    }
    try {
        std::string csv = "kind,m,delta_c\n";
        for (const omb::ResonanceRow& row : omb::resonance_table(p->p)) {
            csv += row.kind;
            csv += ',' + std::to_string(row.m) + ',' + fmt17(row.delta_c) +
                   '\n';
        }
        return dup(csv);
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return nullptr;
    }
}

omb_sweep* omb_sweep_run(const omb_params* p, const char* axis, double from,
                         double to, int points, const char* routes) {
    if (!p) {
        t_last_error = "null argument";
        return nullptr;
    }
    try {
        omb::SweepSpec spec;
        spec.axis = parse_axis(axis);
        spec.from = from;
        spec.to = to;
        spec.points = points;
        spec.routes = parse_routes(routes);
        spec.base = p->p;
        spec.trunc = p->t;
        spec.thresholds = p->th;
        spec.threads = p->threads;
        auto* handle = new omb_sweep{omb::run_sweep(spec)};
        return handle;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return nullptr;
    }
}

void omb_sweep_free(omb_sweep* s) { delete s; }

char* omb_sweep_csv(const omb_sweep* s) {
    if (!s) {
        t_last_error = "null argument";
        return nullptr;
    }
    return dup(omb::to_csv(s->r));
}

char* omb_sweep_provenance(const omb_sweep* s) {
    if (!s) {
        t_last_error = "null argument";
        return nullptr;
    }
    return dup(omb::provenance_json(s->r));
}

int omb_sweep_row_count(const omb_sweep* s) {
    return s ? int(s->r.rows.size()) : 0;
}

int omb_sweep_row(const omb_sweep* s, int i, double* axis_value,
                  const char** route, omb_point* out, const char** error) {
    return guarded([&] {
        if (!s || !axis_value || !route || !out || !error)
            throw omb::ConfigError("null argument");
        if (i < 0 || i >= int(s->r.rows.size()))
            throw omb::ConfigError("row index out of range");
        const omb::SweepRow& row = s->r.rows[size_t(i)];
        *axis_value = row.axis_value;
        *route = omb::route_name(row.route);
        if (row.ok) {
            fill(row.point, out);
            *error = nullptr;
        } else {
            *out = omb_point{};
            *error = row.error.c_str();
        }
    });
}

int omb_sweep_feature_count(const omb_sweep* s) {
    return s ? int(s->r.features.size()) : 0;
}

int omb_sweep_feature(const omb_sweep* s, int i, const char** route,
                      int* is_dip, double* axis_value, double* g2) {
    return guarded([&] {
        if (!s || !route || !is_dip || !axis_value || !g2)
            throw omb::ConfigError("null argument");
        if (i < 0 || i >= int(s->r.features.size()))
            throw omb::ConfigError("feature index out of range");
        const omb::Feature& f = s->r.features[size_t(i)];
        *route = omb::route_name(f.route);
        *is_dip = f.is_dip ? 1 : 0;
        *axis_value = f.axis_value;
        *g2 = f.g2;
    });
}

int omb_sweep_window_count(const omb_sweep* s) {
    return s ? int(s->r.windows.size()) : 0;
}

int omb_sweep_window(const omb_sweep* s, int i, const char** route,
                     double* lo, double* hi) {
    return guarded([&] {
        if (!s || !route || !lo || !hi)
            throw omb::ConfigError("null argument");
        if (i < 0 || i >= int(s->r.windows.size()))
            throw omb::ConfigError("window index out of range");
        const omb::Window& w = s->r.windows[size_t(i)];
        *route = omb::route_name(w.route);
        *lo = w.lo;
        *hi = w.hi;
    });
}

omb_scan* omb_scan_run(const omb_params* p, double from, double to,
                       int points, const double* pumps, const int* pump_nb,
                       int n_pumps, const char* route) {
    if (!p || !pumps || n_pumps < 1) {
        t_last_error = "null argument or empty pump list";
        return nullptr;
    }
    try {
        omb::ScanSpec spec;
        spec.base = p->p;
        spec.trunc = p->t;
        spec.pumps.assign(pumps, pumps + n_pumps);
        if (pump_nb) spec.pump_nb.assign(pump_nb, pump_nb + n_pumps);
        spec.from = from;
        spec.to = to;
        spec.points = points;
        spec.route = parse_route(route);
        spec.thresholds = p->th;
        spec.threads = p->threads;
        return new omb_scan{omb::simultaneous_blockade_scan(spec)};
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return nullptr;
    }
}

void omb_scan_free(omb_scan* s) { delete s; }

char* omb_scan_provenance(const omb_scan* s) {
    if (!s) {
        t_last_error = "null argument";
        return nullptr;
    }
    return dup(omb::scan_provenance_json(s->r));
}

char* omb_scan_pump_csv(const omb_scan* s, int k) {
    if (!s || k < 0 || k >= int(s->r.per_pump.size())) {
        t_last_error = "pump index out of range";
        return nullptr;
    }
    return dup(omb::to_csv(s->r.per_pump[size_t(k)]));
}

int omb_scan_flagged_count(const omb_scan* s) {
    return s ? int(s->r.flagged_intervals.size()) : 0;
}

int omb_scan_flagged(const omb_scan* s, int i, double* lo, double* hi) {
    return guarded([&] {
        if (!s || !lo || !hi) throw omb::ConfigError("null argument");
        if (i < 0 || i >= int(s->r.flagged_intervals.size()))
            throw omb::ConfigError("interval index out of range");
        *lo = s->r.flagged_intervals[size_t(i)].first;
        *hi = s->r.flagged_intervals[size_t(i)].second;
    });
}

int omb_convergence_run(const omb_params* p, const char* route, char** table,
                        int* converged) {
    return guarded([&] {
        if (!p || !table || !converged)
            throw omb::ConfigError("null argument");
        const omb::ConvergenceReport report =
            omb::convergence_ladder(p->p, parse_route(route), p->th);

        std::string text = " n_a  n_b                   g2                   "
                           "g3    dg2_rel    dg3_rel\n";
        char line[160];
        for (const omb::ConvergenceStep& s : report.steps) {
            const bool first = &s == &report.steps.front();
            char d2[16] = "-", d3[16] = "-";
            if (!first) {
                std::snprintf(d2, sizeof d2, "%.3g", s.g2_delta);
                std::snprintf(d3, sizeof d3, "%.3g", s.g3_delta);
            }
            std::snprintf(line, sizeof line,
                          "%4d %4d %20.12g %20.12g %10s %10s\n", s.trunc.n_a,
                          s.trunc.n_b, s.point.g2, s.point.g3, d2, d3);
            text += line;
        }
        text += report.converged
                    ? "converged: final step moves g2 and g3 by < 1%\n"
                    : "NOT converged: final step moves g2 or g3 by >= 1%\n";
        *table = dup(text);
        *converged = report.converged ? 1 : 0;
    });
}

int omb_validate_run(uint64_t seed, int as_printed, char** table,
                     int* all_pass) {
    return guarded([&] {
        if (!table || !all_pass) throw omb::ConfigError("null argument");
        const omb::CheckReport report =
            omb::run_checks(seed, as_printed != 0);
        *table = dup(omb::format_table(report));
        *all_pass = report.all_pass ? 1 : 0;
    });
}

int omb_state_dump(const omb_params* p, const char* path) {
    return guarded([&] {
        if (!p || !path) throw omb::ConfigError("null argument");
        const omb::DensityMatrix rho =
            omb::steady_state(omb::liouvillian(p->p, p->t));
        omb::write_state_dump(rho, p->p, path);
    });
}

}  // extern "C"
