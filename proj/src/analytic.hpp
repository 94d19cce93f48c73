#pragma once

#include "correlation.hpp"
#include "params.hpp"

namespace omb {

struct ChiSet {
    double chi1, chi2, chi3;          // chi_n = delta_c - n*eta
    double s1, s2, s3;                // chi_n - delta
};

ChiSet chi_set(const SystemParams& p);

// Closed-form correlations in the zero-sideband approximation:
//   g2 = [4(chi1-delta)^2 + gamma_c^2] / [4(chi2-delta)^2 + gamma_c^2]
//   g3 = [4(chi1-delta)^2 + gamma_c^2]^2
//        / ([4(chi2-delta)^2 + gamma_c^2][4(chi3-delta)^2 + gamma_c^2])
double g2_analytic(const SystemParams& p);
double g3_analytic(const SystemParams& p);

// The g3 numerator as printed in the source derivation's summary form,
// 4[(chi1-delta)^2 + gamma_c^2]^2, is dimensionally inconsistent with g2 and
// with the full derivation; it is kept only as a negative control for the
// validation suite.
double g3_analytic_as_printed(const SystemParams& p);

// On-resonance values, independent of the pump strength:
//   spr_g2 = gamma_c^2 / (4 eta^2 + gamma_c^2),  tpr_g2 = its reciprocal.
double spr_g2(const SystemParams& p);
double tpr_g2(const SystemParams& p);

// Pump strength minimizing g2_analytic over G at fixed detuning:
//   G* = [-3 g0^2 + sqrt(g0^4 + gamma_c^2 omega_m^2) + 2 delta_c omega_m]
//        / (4 g0).
double turning_point_pump(double delta_c, const SystemParams& p);

// Full correlation point for the analytic route: P1 is the resonant
// Lorentzian Omega^2 / [(delta_c - eta - delta)^2 + (gamma_c/2)^2], and
// P2, P3 are back-filled from the correlation values so that
// g2 = 2 P2 / P1^2 and g3 = 6 P3 / P1^3 hold exactly.
CorrelationPoint analytic_point(const SystemParams& p, bool as_printed = false,
                                const Thresholds& th = {});

}  // namespace omb
