#pragma once

#include <Eigen/Dense>

#include "correlation.hpp"
#include "fock.hpp"
#include "params.hpp"

namespace omb {

// Weak-drive amplitudes c(n, m) for photon numbers n = 0..3 and phonon
// sidebands m = 0..m_max. Global phases are dropped; only |c|^2 feeds any
// observable.
struct AmplitudeSet {
    Eigen::MatrixXcd c;  // 4 x (m_max + 1)
    SystemParams params;
    int m_max = 0;
    // Relative change of the excited amplitudes when the intermediate-state
    // sums are truncated one sideband earlier; a convergence indicator.
    double truncation_remainder = 0.0;
    // Squared norm of the raw propagated state before renormalization: the
    // probability that no photon has decayed yet. 1 for stationary sets.
    double survival = 1.0;
};

// Stationary amplitudes of the driven few-photon cascade. Each photon level
// n is reached through a chain of n drive actions; each hop carries a
// displaced-basis overlap with displacement g0/omega_m and a resonance
// denominator E_{n,m} - E_{0,0} - i n gamma_c / 2.
AmplitudeSet long_time_amplitudes(const SystemParams& p, int m_max);

struct Probabilities {
    double P1, P2, P3;
};

// P_n = sum_m |c(n, m)|^2.
Probabilities probabilities(const AmplitudeSet& a);

// Weak-drive reductions. P1 at or below zero is an undefined correlation.
double g2_weak(double P1, double P2);
double g3_weak(double P1, double P3);

// First-order closed forms with beta = g0/omega_m.
// P1: resonant Lorentzian plus (optionally) the one-phonon sideband term
//     beta^2 Omega^2 / [(delta_c + omega_m - eta - delta)^2 + (gamma_c/2)^2].
double appendix_P1(const SystemParams& p, bool include_sideband = true);

// P3: leading term 6 Omega^6 |1/(E Q0 H)|^2 with the eigenvalue-difference
// denominators
//   E = E_{1,0}-E_{0,0}-i gamma_c/2,  F = E_{1,1}-E_{0,0}-i gamma_c/2,
//   H/I/J = E_{2,0/1/2}-E_{0,0}-i gamma_c,  Qm = E_{3,m}-E_{0,0}-i 3gamma_c/2.
// include_branches adds the m = 1..3 sideband branches, which are
// O(beta^2..beta^6) relative to the leading term.
double appendix_P3(const SystemParams& p, bool include_branches = false);

// RK4 integration of the non-Hermitian amplitude equations of motion from
// the vacuum; the independent oracle for long_time_amplitudes. Requires
// dt <= 0.01 / max(omega_m, gamma_c, |delta_c|). The raw norm decays
// monotonically under the photon-loss term (recorded in `survival`); the
// returned amplitudes are divided by the vacuum amplitude so they share the
// stationary cascade's normalization C(0,0) = 1.
AmplitudeSet propagate_nonhermitian(const SystemParams& p, double t_final,
                                    double dt, int m_max);

// Correlation point for the perturbative route.
CorrelationPoint perturbative_point(const SystemParams& p, int m_max,
                                    const Thresholds& th = {});

}  // namespace omb
