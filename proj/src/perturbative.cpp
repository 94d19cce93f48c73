#include "perturbative.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "spectrum.hpp"

namespace omb {

namespace {

using std::complex;

constexpr complex<double> kI{0.0, 1.0};

// E_{n,m} - E_{0,0} - i n gamma_c / 2, the resonance denominator of the
// n-photon amplitude.
complex<double> denominator(const SystemParams& p, int n, int m) {
    const double gap = eigenenergy({n, m}, p) - eigenenergy({0, 0}, p);
    return gap - kI * (0.5 * n * p.gamma_c);
}

// Overlap matrix for a one-photon hop upward: up(l, k) = <l~(n+1)|k~(n)>.
// The displacement gap between adjacent photon levels is g0/omega_m for
// every n, so one matrix serves all hops.
Eigen::MatrixXd hop_matrix(const SystemParams& p, int m_max) {
    const double beta = p.g0 / p.omega_m;
    Eigen::MatrixXd up(m_max + 1, m_max + 1);
    for (int l = 0; l <= m_max; ++l)
        for (int k = 0; k <= m_max; ++k) up(l, k) = displaced_overlap(l, k, beta);
    return up;
}

// Assemble the stationary amplitudes with intermediate sums cut at
// `inner_cut` sidebands while the target index still runs to m_max.
Eigen::MatrixXcd assemble(const SystemParams& p, const Eigen::MatrixXd& up,
                          int m_max, int inner_cut) {
    const double W = p.Omega;
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(4, m_max + 1);
    c(0, 0) = 1.0;

    std::vector<complex<double>> d1(m_max + 1), d2(m_max + 1), d3(m_max + 1);
    for (int m = 0; m <= m_max; ++m) {
        d1[m] = denominator(p, 1, m);
        d2[m] = denominator(p, 2, m);
        d3[m] = denominator(p, 3, m);
    }

    for (int m = 0; m <= m_max; ++m) c(1, m) = -W * up(m, 0) / d1[m];

    for (int m = 0; m <= m_max; ++m) {
        complex<double> acc = 0.0;
        for (int n = 0; n <= inner_cut; ++n) acc += up(m, n) * up(n, 0) / d1[n];
        c(2, m) = std::sqrt(2.0) * W * W * acc / d2[m];
    }

    for (int m = 0; m <= m_max; ++m) {
        complex<double> acc = 0.0;
        for (int mp = 0; mp <= inner_cut; ++mp) {
            complex<double> inner = 0.0;
            for (int q = 0; q <= inner_cut; ++q)
                inner += up(mp, q) * up(q, 0) / d1[q];
            acc += up(m, mp) * inner / d2[mp];
        }
        c(3, m) = -std::sqrt(6.0) * W * W * W * acc / d3[m];
    }
    return c;
}

}  // namespace

AmplitudeSet long_time_amplitudes(const SystemParams& p, int m_max) {
    validate(p);
    if (m_max < 2) throw ConfigError("m_max must be at least 2");

    const Eigen::MatrixXd up = hop_matrix(p, m_max);
    AmplitudeSet out;
    out.params = p;
    out.m_max = m_max;
    out.c = assemble(p, up, m_max, m_max);

    const Eigen::MatrixXcd cut = assemble(p, up, m_max, m_max - 1);
    const double scale = out.c.bottomRows(3).norm();
    out.truncation_remainder =
        scale > 0.0 ? (out.c.bottomRows(3) - cut.bottomRows(3)).norm() / scale
                    : 0.0;
    return out;
}

Probabilities probabilities(const AmplitudeSet& a) {
    return {a.c.row(1).squaredNorm(), a.c.row(2).squaredNorm(),
            a.c.row(3).squaredNorm()};
}

double g2_weak(double P1, double P2) {
    if (!(P1 > 0.0))
        throw UndefinedCorrelation("g2 undefined: single-photon weight is zero");
    return 2.0 * P2 / (P1 * P1);
}

double g3_weak(double P1, double P3) {
    if (!(P1 > 0.0))
        throw UndefinedCorrelation("g3 undefined: single-photon weight is zero");
    return 6.0 * P3 / (P1 * P1 * P1);
}

double appendix_P1(const SystemParams& p, bool include_sideband) {
    validate(p);
    const DerivedScalars d = derived_scalars(p);
    const double beta = p.g0 / p.omega_m;
    const double hw = 0.5 * p.gamma_c;
    const double s0 = p.delta_c - d.eta - d.delta;
    double P1 = p.Omega * p.Omega / (s0 * s0 + hw * hw);
    if (include_sideband) {
        const double s1 = p.delta_c + p.omega_m - d.eta - d.delta;
        P1 += beta * beta * p.Omega * p.Omega / (s1 * s1 + hw * hw);
    }
    return P1;
}

double appendix_P3(const SystemParams& p, bool include_branches) {
    validate(p);
    const double beta = p.g0 / p.omega_m;
    const double W6 = std::pow(p.Omega, 6);

    const complex<double> E = denominator(p, 1, 0);
    const complex<double> F = denominator(p, 1, 1);
    const complex<double> H = denominator(p, 2, 0);
    const complex<double> Id = denominator(p, 2, 1);
    const complex<double> J = denominator(p, 2, 2);
    complex<double> Q[4];
    for (int m = 0; m <= 3; ++m) Q[m] = denominator(p, 3, m);

    double P3 = 6.0 * W6 * std::norm(1.0 / (E * Q[0] * H));
    if (include_branches) {
        const double b2 = beta * beta;
        P3 += 6.0 * W6 * b2 *
              std::norm(1.0 / (E * Q[1] * H) + 1.0 / (E * Q[1] * Id) +
                        1.0 / (F * Q[1] * Id));
        P3 += 12.0 * W6 * b2 * b2 *
              std::norm(1.0 / (E * Q[2] * J) + 1.0 / (F * Q[2] * J) +
                        1.0 / (F * Q[2] * Id));
        P3 += 36.0 * W6 * b2 * b2 * b2 * std::norm(1.0 / (F * Q[3] * J));
    }
    return P3;
}

AmplitudeSet propagate_nonhermitian(const SystemParams& p, double t_final,
                                    double dt, int m_max) {
    validate(p);
    if (m_max < 2) throw ConfigError("m_max must be at least 2");
    if (!(t_final > 0.0) || !(dt > 0.0))
        throw ConfigError("t_final and dt must be positive");
    const double rate =
        std::max({p.omega_m, p.gamma_c, std::abs(p.delta_c)});
    if (dt > 0.01 / rate)
        throw ConfigError("dt too coarse for the fastest system timescale");

    const int M = m_max + 1;
    const Eigen::MatrixXd up = hop_matrix(p, m_max);
    const Eigen::MatrixXd down = up.transpose();

    // Columns are photon levels; diag[n] = i E_{n,m} + n gamma_c / 2.
    std::array<Eigen::ArrayXcd, 4> diag;
    for (int n = 0; n <= 3; ++n) {
        diag[n] = Eigen::ArrayXcd(M);
        for (int m = 0; m < M; ++m)
            diag[n](m) = kI * eigenenergy({n, m}, p) + 0.5 * n * p.gamma_c;
    }

    const auto deriv = [&](const Eigen::MatrixXcd& y) {
        Eigen::MatrixXcd dy(M, 4);
        for (int n = 0; n <= 3; ++n) {
            dy.col(n) = -(diag[n] * y.col(n).array()).matrix();
            if (n > 0)
                dy.col(n) -= kI * (p.Omega * std::sqrt(double(n))) *
                             (up * y.col(n - 1));
            if (n < 3)
                dy.col(n) -= kI * (p.Omega * std::sqrt(double(n + 1))) *
                             (down * y.col(n + 1));
        }
        return dy;
    };

    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(M, 4);
    y(0, 0) = 1.0;

    const long steps = static_cast<long>(std::ceil(t_final / dt));
    const double h = t_final / double(steps);
    for (long s = 0; s < steps; ++s) {
        const Eigen::MatrixXcd k1 = deriv(y);
        const Eigen::MatrixXcd k2 = deriv(y + 0.5 * h * k1);
        const Eigen::MatrixXcd k3 = deriv(y + 0.5 * h * k2);
        const Eigen::MatrixXcd k4 = deriv(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    AmplitudeSet out;
    out.params = p;
    out.m_max = m_max;
    out.c = y.transpose();
    out.survival = out.c.squaredNorm();

    // Conditional no-loss evolution shrinks the norm at rate gamma_c <n>,
    // uniformly across the cascade to leading order; dividing by the vacuum
    // amplitude restores the stationary normalization C(0,0) = 1.
    const complex<double> c0 = out.c(0, 0);
    if (std::abs(c0) < 1e-6)
        throw NumericalError("vacuum amplitude vanished during propagation");
    out.c /= c0;
    return out;
}

CorrelationPoint perturbative_point(const SystemParams& p, int m_max,
                                    const Thresholds& th) {
    const AmplitudeSet a = long_time_amplitudes(p, m_max);
    const Probabilities pr = probabilities(a);
    CorrelationPoint out;
    out.P1 = pr.P1;
    out.P2 = pr.P2;
    out.P3 = pr.P3;
    out.mean_n = pr.P1 + 2.0 * pr.P2 + 3.0 * pr.P3;
    out.g2 = g2_weak(pr.P1, pr.P2);
    out.g3 = g3_weak(pr.P1, pr.P3);
    out.route = Route::perturbative;
    out.label = classify(out.g2, out.g3, th);
    return out;
}

}  // namespace omb
