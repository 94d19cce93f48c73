#include "analytic.hpp"

#include <cmath>

namespace omb {

Label classify(double g2, double g3, const Thresholds& th) {
    if (!(g2 >= 0) || !(g3 >= 0))
        throw ConfigError("classify: correlations must be non-negative");
    if (g2 > 1.0 && g3 < 1.0) return Label::two_pb;
    if (g2 < th.tau1) return Label::one_pb;
    if (g2 > th.tau2) return Label::pit;
    if (g2 < 1.0) return Label::sub_poisson;
    if (g2 > 1.0) return Label::super_poisson;
    return Label::none;
}

const char* route_name(Route r) {
    switch (r) {
        case Route::analytic: return "analytic";
        case Route::perturbative: return "perturbative";
        case Route::master: return "master";
    }
    return "?";
}

const char* label_name(Label l) {
    switch (l) {
        case Label::none: return "None";
        case Label::one_pb: return "OnePB";
        case Label::two_pb: return "TwoPB";
        case Label::pit: return "PIT";
        case Label::sub_poisson: return "SubPoisson";
        case Label::super_poisson: return "SuperPoisson";
    }
    return "?";
}

ChiSet chi_set(const SystemParams& p) {
    auto [eta, delta] = derived_scalars(p);
    ChiSet c;
    c.chi1 = p.delta_c - eta;
    c.chi2 = p.delta_c - 2.0 * eta;
    c.chi3 = p.delta_c - 3.0 * eta;
    c.s1 = c.chi1 - delta;
    c.s2 = c.chi2 - delta;
    c.s3 = c.chi3 - delta;
    return c;
}

static double bracket(double s, double gamma_c) {
    return 4.0 * s * s + gamma_c * gamma_c;
}

double g2_analytic(const SystemParams& p) {
    ChiSet c = chi_set(p);
    return bracket(c.s1, p.gamma_c) / bracket(c.s2, p.gamma_c);
}

double g3_analytic(const SystemParams& p) {
    ChiSet c = chi_set(p);
    double num = bracket(c.s1, p.gamma_c);
    return num * num / (bracket(c.s2, p.gamma_c) * bracket(c.s3, p.gamma_c));
}

double g3_analytic_as_printed(const SystemParams& p) {
    ChiSet c = chi_set(p);
    double g2 = p.gamma_c * p.gamma_c;
    double num = c.s1 * c.s1 + g2;
    return 4.0 * num * num / (bracket(c.s2, p.gamma_c) * bracket(c.s3, p.gamma_c));
}

double spr_g2(const SystemParams& p) {
    auto [eta, delta] = derived_scalars(p);
    (void)delta;
    double g2 = p.gamma_c * p.gamma_c;
    return g2 / (4.0 * eta * eta + g2);
}

double tpr_g2(const SystemParams& p) { return 1.0 / spr_g2(p); }

double turning_point_pump(double delta_c, const SystemParams& p) {
    if (p.g0 <= 0)
        throw ConfigError("turning_point_pump: g0 must be > 0");
    double g0sq = p.g0 * p.g0;
    return (-3.0 * g0sq +
            std::sqrt(g0sq * g0sq + p.gamma_c * p.gamma_c * p.omega_m * p.omega_m) +
            2.0 * delta_c * p.omega_m) /
           (4.0 * p.g0);
}

CorrelationPoint analytic_point(const SystemParams& p, bool as_printed,
                                const Thresholds& th) {
    auto [eta, delta] = derived_scalars(p);
    double s1 = p.delta_c - eta - delta;
    double half = p.gamma_c / 2.0;
    CorrelationPoint out;
    out.route = Route::analytic;
    out.P1 = p.Omega * p.Omega / (s1 * s1 + half * half);
    out.g2 = g2_analytic(p);
    out.g3 = as_printed ? g3_analytic_as_printed(p) : g3_analytic(p);
    out.P2 = out.g2 * out.P1 * out.P1 / 2.0;
    out.P3 = out.g3 * out.P1 * out.P1 * out.P1 / 6.0;
    out.mean_n = out.P1 + 2.0 * out.P2 + 3.0 * out.P3;
    out.label = classify(out.g2, out.g3, th);
    return out;
}

}  // namespace omb
