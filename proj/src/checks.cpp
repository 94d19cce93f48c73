#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "analytic.hpp"
#include "fock.hpp"
#include "params.hpp"
#include "perturbative.hpp"
#include "spectrum.hpp"

namespace omb {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double rel(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

struct Draw {
    std::mt19937_64 eng;
    explicit Draw(std::uint64_t seed) : eng(seed) {}
    double uniform(double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(eng);
    }
    SystemParams params() {
        SystemParams p;
        p.omega_m = uniform(0.5, 2.0);
        p.g0 = uniform(0.05, 1.0);
        p.G = uniform(0.0, 1.5);
        p.gamma_c = uniform(0.05, 1.0);
        p.delta_c = uniform(-2.0, 2.0);
        return p;
    }
};

CheckResult shift_covariance(Draw& d, bool as_printed) {
    const auto g3 = as_printed ? g3_analytic_as_printed : g3_analytic;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const SystemParams p = d.params();
        SystemParams shifted = p;
        shifted.G = 0.0;
        shifted.delta_c = p.delta_c - derived_scalars(p).delta;
        worst = std::max(worst, rel(g2_analytic(p), g2_analytic(shifted)));
        worst = std::max(worst, rel(g3(p), g3(shifted)));
    }
    return {"shift-covariance", worst <= 1e-12,
            "max rel dev " + num(worst) + " over 1000 draws (tol 1e-12)"};
}

CheckResult resonance_invariance(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        SystemParams p = d.params();
        p.delta_c = spr_detuning(p);
        worst = std::max(worst, rel(g2_analytic(p), spr_g2(p)));
        p.delta_c = tpr_detuning(p, 0);
        worst = std::max(worst, rel(g2_analytic(p), tpr_g2(p)));
    }
    return {"resonance-invariance", worst <= 1e-12,
            "max rel dev " + num(worst) + " over 100 draws (tol 1e-12)"};
}

CheckResult turning_point(Draw& d) {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        SystemParams p = d.params();
        p.g0 = d.uniform(0.1, 1.0);
        // Pick the detuning so the minimum lands at a random interior pump.
        const double target = d.uniform(0.05, 1.5);
        p.delta_c = (4.0 * p.g0 * target + 3.0 * p.g0 * p.g0 -
                     std::sqrt(std::pow(p.g0, 4) +
                               p.gamma_c * p.gamma_c * p.omega_m * p.omega_m)) /
                    (2.0 * p.omega_m);
        const double formula = turning_point_pump(p.delta_c, p);

        const double step = 1e-4;
        const double lo = std::max(0.0, formula - 0.2);
        double best_g = lo, best_v = 1e300;
        for (double g = lo; g <= formula + 0.2; g += step) {
            SystemParams q = p;
            q.G = g;
            const double v = g2_analytic(q);
            if (v < best_v) {
                best_v = v;
                best_g = g;
            }
        }
        worst = std::max(worst, std::abs(best_g - formula));
    }
    return {"turning-point", worst <= 2e-4,
            "max |formula - argmin| " + num(worst) +
                " over 50 draws (tol 2e-4)"};
}

CheckResult overlap_oracle(Draw& d) {
    double worst = 0.0;
    for (int rep = 0; rep < 8; ++rep) {
        const double alpha = d.uniform(-1.5, 1.5);
        const ComplexOperator dm = displacement_matrix(40, alpha);
        for (int l = 0; l <= 12; ++l)
            for (int k = 0; k <= 12; ++k)
                worst = std::max(worst, std::abs(displaced_overlap(l, k, alpha) -
                                                 dm.data(l, k).real()));
    }
    return {"overlap-oracle", worst <= 1e-8,
            "max |closed form - matrix exp| " + num(worst) + " (tol 1e-8)"};
}

CheckResult overlap_completeness(Draw& d) {
    double worst = 0.0;
    for (int rep = 0; rep < 8; ++rep) {
        const double alpha = d.uniform(-1.5, 1.5);
        for (int l = 0; l <= 12; ++l) {
            double sum = 0.0;
            for (int k = 0; k < 60; ++k) {
                const double v = displaced_overlap(l, k, alpha);
                sum += v * v;
            }
            worst = std::max(worst, std::abs(1.0 - sum));
        }
    }
    return {"overlap-completeness", worst <= 1e-8,
            "max row-norm deficit " + num(worst) + " (tol 1e-8)"};
}

CheckResult first_order_overlap() {
    double worst = 0.0;
    for (const double alpha : {1e-3, -1e-3, 1e-4}) {
        for (int l = 0; l <= 8; ++l)
            for (int k = 0; k <= 8; ++k) {
                const double diff =
                    std::abs(displaced_overlap(l, k, alpha) -
                             displaced_overlap_first_order(l, k, alpha));
                worst = std::max(worst, diff / (alpha * alpha));
            }
    }
    return {"first-order-overlap", worst <= 20.0,
            "max |exact - linear| / alpha^2 = " + num(worst) + " (tol 20)"};
}

CheckResult appendix_equivalence(Draw& d, bool as_printed) {
    const auto g3 = as_printed ? g3_analytic_as_printed : g3_analytic;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        SystemParams p = d.params();
        p.Omega = 0.01;
        const double P1 = appendix_P1(p, false);
        const double from_appendix = 6.0 * appendix_P3(p, false) / (P1 * P1 * P1);
        worst = std::max(worst, rel(g3(p), from_appendix));
    }
    return {"appendix-equivalence", worst <= 1e-10,
            "max rel dev " + num(worst) + " over 200 draws (tol 1e-10)"};
}

CheckResult amplitude_propagation() {
    double worst = 0.0;
    for (const auto& [dc, G] : {std::pair{0.22, 0.0}, {0.56, 0.3}}) {
        SystemParams p;
        p.delta_c = dc;
        p.G = G;
        const AmplitudeSet closed = long_time_amplitudes(p, 8);
        const AmplitudeSet evolved =
            propagate_nonhermitian(p, 20.0 / p.gamma_c, 0.009, 8);
        const Probabilities a = probabilities(closed);
        const Probabilities b = probabilities(evolved);
        worst = std::max({worst, rel(a.P1, b.P1), rel(a.P2, b.P2),
                          rel(a.P3, b.P3)});
    }
    return {"amplitude-propagation", worst <= 0.05,
            "max rel dev on P1..P3 " + num(worst) + " (tol 0.05)"};
}

}  // namespace

CheckReport run_checks(std::uint64_t seed, bool as_printed) {
    Draw d(seed);
    CheckReport report;
    report.rows.push_back(shift_covariance(d, as_printed));
    report.rows.push_back(resonance_invariance(d));
    report.rows.push_back(turning_point(d));
    report.rows.push_back(overlap_oracle(d));
    report.rows.push_back(overlap_completeness(d));
    report.rows.push_back(first_order_overlap());
    report.rows.push_back(appendix_equivalence(d, as_printed));
    report.rows.push_back(amplitude_propagation());
    report.all_pass = std::all_of(report.rows.begin(), report.rows.end(),
                                  [](const CheckResult& r) { return r.pass; });
    return report;
}

std::string format_table(const CheckReport& report) {
    std::string out;
    for (const CheckResult& r : report.rows) {
        out += r.pass ? "PASS  " : "FAIL  ";
        out += r.name;
        out.append(r.name.size() < 24 ? 24 - r.name.size() : 1, ' ');
        out += r.detail;
        out += '\n';
    }
    return out;
}

}  // namespace omb
