#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "omblock.h"

namespace {

struct RunError {
    int code;
    std::string message;
};

void check(int status) {
    if (status != OMB_OK) throw RunError{status, omb_last_error()};
}

[[noreturn]] void fail(int code, const std::string& message) {
    throw RunError{code, message};
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string owned(char* s) {
    if (!s) throw RunError{OMB_ERR_NUMERIC, omb_last_error()};
    std::string out(s);
    omb_string_free(s);
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(OMB_ERR_CONFIG, "cannot open output file: " + path);
    os << content;
    if (!os) fail(OMB_ERR_NUMERIC, "write failed: " + path);
}

// CSV file plus sidecar JSON when writing to disk; bare CSV on stdout.
void emit(const std::string& csv, const std::string& sidecar,
          const std::string& out) {
    if (out.empty()) {
        std::cout << csv;
        return;
    }
    write_file(out, csv);
    if (sidecar.empty()) return;
    std::string side = out;
    if (side.size() > 4 && side.substr(side.size() - 4) == ".csv")
        side.resize(side.size() - 4);
    write_file(side + ".json", sidecar);
}

using ParamsPtr = std::unique_ptr<omb_params, decltype(&omb_params_free)>;

// Shared parameter flags. Figure-caption names, in units of omega_m; a
// config file loads first and explicit flags override it.
struct ParamFlags {
    double g0 = 0, gamma_c = 0, gamma_m = 0, pump = 0, drive = 0,
           delta_c = 0, nbar = 0;
    int na = 0, nb = 0, m_max = 0, threads = 0;
    std::string config;
    CLI::App* cmd = nullptr;
    bool has_physics = true;

    void attach(CLI::App* c, bool physics = true) {
        cmd = c;
        has_physics = physics;
        c->add_option("--config", config, "JSON parameter file");
        if (physics) {
            c->add_option("--g0", g0, "optomechanical coupling");
            c->add_option("--gamma-c", gamma_c, "cavity decay rate");
            c->add_option("--gamma-m", gamma_m, "mechanical decay rate");
            c->add_option("--pump", pump, "mechanical pump strength G");
            c->add_option("--drive", drive, "optical drive amplitude Omega");
            c->add_option("--delta-c", delta_c, "driving detuning");
            c->add_option("--nbar", nbar, "thermal phonon occupancy");
        }
        c->add_option("--na", na, "photon levels");
        c->add_option("--nb", nb, "phonon levels");
        c->add_option("--m-max", m_max, "amplitude-expansion phonon cutoff");
        c->add_option("--threads", threads, "sweep work-pool size (0 = auto)");
    }

    ParamsPtr resolve() const {
        ParamsPtr P(omb_params_new(), &omb_params_free);
        if (!P) fail(OMB_ERR_NUMERIC, "out of memory");
        if (cmd->count("--config")) {
            std::ifstream is(config);
            if (!is) fail(OMB_ERR_CONFIG, "cannot read config: " + config);
            std::stringstream ss;
            ss << is.rdbuf();
            check(omb_params_load_json(P.get(), ss.str().c_str()));
        }
        const auto set = [&](const char* flag, const char* key, double v) {
            if (cmd->count(flag)) check(omb_params_set(P.get(), key, v));
        };
        if (has_physics) {
            set("--g0", "g0", g0);
            set("--gamma-c", "gamma_c", gamma_c);
            set("--gamma-m", "gamma_m", gamma_m);
            set("--pump", "G", pump);
            set("--drive", "Omega", drive);
            set("--delta-c", "delta_c", delta_c);
            set("--nbar", "nbar_m", nbar);
        }
        set("--na", "n_a", na);
        set("--nb", "n_b", nb);
        set("--m-max", "m_max", m_max);
        set("--threads", "threads", threads);
        return P;
    }
};

// First stderr line of every run: the resolved parameter set, valid as a
// config file for an identical rerun.
void echo(const ParamsPtr& P) {
    std::cerr << owned(omb_params_dump_json(P.get())) << "\n";
}

int run_point(const ParamsPtr& P, const std::string& routes,
              const std::string& out) {
    double dc = 0;
    check(omb_params_get(P.get(), "delta_c", &dc));

    std::string csv =
        "axis_name,axis_value,route,P1,P2,P3,mean_n,g2,g3,label\n";
    std::stringstream list(routes);
    std::string route;
    while (std::getline(list, route, ',')) {
        if (route.empty()) continue;
        omb_point pt{};
        check(omb_eval_point(P.get(), route.c_str(), &pt));
        csv += "delta_c," + fmt17(dc) + ',' + route + ',' + fmt17(pt.P1) +
               ',' + fmt17(pt.P2) + ',' + fmt17(pt.P3) + ',' +
               fmt17(pt.mean_n) + ',' + fmt17(pt.g2) + ',' + fmt17(pt.g3) +
               ',' + omb_label_name(pt.label) + '\n';
    }
    emit(csv, "", out);
    return 0;
}

int run_sweep(const ParamsPtr& P, const std::string& axis, double from,
              double to, int points, const std::string& routes,
              const std::string& out) {
    std::unique_ptr<omb_sweep, decltype(&omb_sweep_free)> s(
        omb_sweep_run(P.get(), axis.c_str(), from, to, points,
                      routes.c_str()),
        &omb_sweep_free);
    if (!s) fail(OMB_ERR_CONFIG, omb_last_error());
    emit(owned(omb_sweep_csv(s.get())),
         owned(omb_sweep_provenance(s.get())), out);
    return 0;
}

int run_resonances(const ParamsPtr& P, const std::string& out) {
    emit(owned(omb_resonance_csv(P.get())), "", out);
    return 0;
}

int run_convergence(const ParamsPtr& P, const std::string& route,
                    const std::string& out) {
    char* table = nullptr;
    int converged = 0;
    check(omb_convergence_run(P.get(), route.c_str(), &table, &converged));
    emit(owned(table), "", out);
    if (!converged)
        fail(OMB_ERR_NUMERIC,
             "not converged: the final truncation step moves g2 or g3 by 1% "
             "or more");
    return 0;
}

int run_validate(std::uint64_t seed, bool as_printed,
                 const std::string& out) {
    char* table = nullptr;
    int all_pass = 0;
    check(omb_validate_run(seed, as_printed ? 1 : 0, &table, &all_pass));
    emit(owned(table), "", out);
    if (!all_pass) fail(OMB_ERR_NUMERIC, "validation checks failed");
    return 0;
}

struct FigureSpec {
    std::string axis = "delta_c";
    double from = -1.0, to = 1.0;
    int points = 401;
    std::string routes = "analytic,master";
    // one entry per output file: (suffix, key, value) fixing G or delta_c
    struct Curve {
        std::string suffix;
        const char* key;
        double value;
    };
    std::vector<Curve> curves;
};

int run_figure(const ParamsPtr& P, const std::string& name, int points_override,
               int nb_override, const std::string& out) {
    const std::string base = out.empty() ? name : out;

    if (name == "fig6") {
        // Simultaneous-blockade scan: three pump strengths on one detuning
        // grid; the strong pump displaces the mechanics far enough to need
        // a deeper phonon truncation.
        const std::vector<double> pumps{0.18, 0.3, 1.2};
        std::vector<int> pump_nb{12, 12, 24};
        if (nb_override > 0) pump_nb.assign(3, nb_override);
        const int points = points_override > 0 ? points_override : 151;
        std::unique_ptr<omb_scan, decltype(&omb_scan_free)> scan(
            omb_scan_run(P.get(), 0.0, 1.5, points, pumps.data(),
                         pump_nb.data(), int(pumps.size()), "master"),
            &omb_scan_free);
        if (!scan) fail(OMB_ERR_CONFIG, omb_last_error());
        for (size_t k = 0; k < pumps.size(); ++k) {
            char suffix[16];
            std::snprintf(suffix, sizeof suffix, "_G%g", pumps[k]);
            write_file(base + suffix + ".csv",
                       owned(omb_scan_pump_csv(scan.get(), int(k))));
        }
        write_file(base + ".json", owned(omb_scan_provenance(scan.get())));
        return 0;
    }

    FigureSpec f;
    if (name == "fig2a") {
        f.curves = {{"", "G", 0.0}};
    } else if (name == "fig2cd") {
        f.routes = "analytic,perturbative,master";
        f.curves = {{"", "G", 0.0}};
    } else if (name == "fig3" || name == "fig5") {
        f.curves = {{"_G0", "G", 0.0}, {"_G0.3", "G", 0.3}};
    } else if (name == "fig4") {
        f.axis = "pump_G";
        f.from = 0.0;
        f.to = 1.0;
        f.points = 201;
        f.curves = {{"_dc0.3", "delta_c", 0.3}, {"_dc0.5", "delta_c", 0.5}};
    } else {
        fail(OMB_ERR_CONFIG, "unknown figure: " + name +
                                 " (expected fig2a, fig2cd, fig3, fig4, "
                                 "fig5 or fig6)");
    }

    const int points = points_override > 0 ? points_override : f.points;
    for (const FigureSpec::Curve& c : f.curves) {
        check(omb_params_set(P.get(), c.key, c.value));
        std::unique_ptr<omb_sweep, decltype(&omb_sweep_free)> s(
            omb_sweep_run(P.get(), f.axis.c_str(), f.from, f.to, points,
                          f.routes.c_str()),
            &omb_sweep_free);
        if (!s) fail(OMB_ERR_CONFIG, omb_last_error());
        write_file(base + c.suffix + ".csv", owned(omb_sweep_csv(s.get())));
        write_file(base + c.suffix + ".json",
                   owned(omb_sweep_provenance(s.get())));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Photon-blockade correlations of a weakly driven optomechanical "
        "cavity with a coherent mechanical pump"};
    app.require_subcommand(1);

    ParamFlags point_flags, sweep_flags, reso_flags, conv_flags, fig_flags;

    auto* point = app.add_subcommand(
        "point", "evaluate one parameter point on the chosen routes");
    point_flags.attach(point);
    std::string point_routes = "analytic,perturbative,master";
    std::string point_out;
    point->add_option("--routes", point_routes, "comma-separated route list");
    point->add_option("--out", point_out, "write CSV here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "grid over delta_c or pump_G");
    sweep_flags.attach(sweep);
    std::string sweep_axis = "delta_c", sweep_routes = "analytic,master",
                sweep_out;
    double sweep_from = -1.0, sweep_to = 1.0;
    int sweep_points = 401;
    sweep->add_option("--axis", sweep_axis, "delta_c or pump_G");
    sweep->add_option("--from", sweep_from, "axis start");
    sweep->add_option("--to", sweep_to, "axis end");
    sweep->add_option("--points", sweep_points, "grid points");
    sweep->add_option("--routes", sweep_routes, "comma-separated route list");
    sweep->add_option("--out", sweep_out,
                      "CSV file (sidecar JSON written next to it)");

    auto* reso = app.add_subcommand(
        "resonances", "single- and two-photon resonance detunings");
    reso_flags.attach(reso);
    std::string reso_out;
    reso->add_option("--out", reso_out, "write CSV here instead of stdout");

    auto* fig = app.add_subcommand(
        "figure", "emit the sweep(s) behind a reference figure");
    fig_flags.attach(fig, /*physics=*/false);
    std::string fig_name, fig_out;
    int fig_points = 0;
    fig->add_option("name", fig_name,
                    "fig2a, fig2cd, fig3, fig4, fig5 or fig6")
        ->required();
    fig->add_option("--points", fig_points, "override preset grid size");
    fig->add_option("--out", fig_out, "output base path (default: the name)");

    auto* conv = app.add_subcommand(
        "convergence", "truncation ladder (4,8) -> (6,12) -> (8,24)");
    conv_flags.attach(conv);
    std::string conv_route = "master", conv_out;
    conv->add_option("--routes", conv_route, "route to test");
    conv->add_option("--out", conv_out, "write table here instead of stdout");

    auto* val = app.add_subcommand(
        "validate", "cross-route invariant suite with random draws");
    std::uint64_t val_seed = 12345;
    bool val_as_printed = false;
    std::string val_out;
    val->add_option("--seed", val_seed, "RNG seed for parameter draws");
    val->add_flag("--as-printed", val_as_printed,
                  "use the uncorrected three-photon closed form "
                  "(negative control; the equivalence check must fail)");
    val->add_option("--out", val_out, "write table here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        nlohmann::json diag{
            {"error",
             {{"code", 2}, {"kind", "config"}, {"message", e.what()}}}};
        std::cerr << diag.dump() << "\n";
        return 2;
    }

    try {
        if (point->parsed()) {
            const ParamsPtr P = point_flags.resolve();
            echo(P);
            return run_point(P, point_routes, point_out);
        }
        if (sweep->parsed()) {
            const ParamsPtr P = sweep_flags.resolve();
            echo(P);
            return run_sweep(P, sweep_axis, sweep_from, sweep_to,
                             sweep_points, sweep_routes, sweep_out);
        }
        if (reso->parsed()) {
            const ParamsPtr P = reso_flags.resolve();
            echo(P);
            return run_resonances(P, reso_out);
        }
        if (fig->parsed()) {
            const ParamsPtr P = fig_flags.resolve();
            echo(P);
            return run_figure(P, fig_name, fig_points, fig_flags.nb, fig_out);
        }
        if (conv->parsed()) {
            const ParamsPtr P = conv_flags.resolve();
            echo(P);
            return run_convergence(P, conv_route, conv_out);
        }
        if (val->parsed()) {
            return run_validate(val_seed, val_as_printed, val_out);
        }
    } catch (const RunError& err) {
        const int code =
            err.code == OMB_ERR_CONFIG ? OMB_ERR_CONFIG : OMB_ERR_NUMERIC;
        nlohmann::json diag{{"error",
                             {{"code", code},
                              {"kind", code == OMB_ERR_CONFIG ? "config"
                                                              : "numerical"},
                              {"message", err.message}}}};
        std::cerr << diag.dump() << "\n";
        return code;
    } catch (const std::exception& e) {
        nlohmann::json diag{
            {"error",
             {{"code", 3}, {"kind", "numerical"}, {"message", e.what()}}}};
        std::cerr << diag.dump() << "\n";
        return 3;
    }
    return 0;
}
