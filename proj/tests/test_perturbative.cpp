#include <cmath>
#include <complex>

#include <doctest.h>

#include "analytic.hpp"
#include "perturbative.hpp"

using namespace omb;

namespace {

SystemParams at(double delta_c, double G = 0.0) {
    SystemParams p;
    p.delta_c = delta_c;
    p.G = G;
    return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("no drive leaves only the vacuum amplitude") {
    SystemParams p = at(0.3, 0.2);
    p.Omega = 0.0;
    auto a = long_time_amplitudes(p, 6);
    CHECK(a.c(0, 0) == std::complex<double>(1.0));
    CHECK(a.c.bottomRows(3).norm() == 0.0);
    CHECK(a.truncation_remainder == 0.0);
}

TEST_CASE("empty cavity reduces to the bare Lorentzian") {
    SystemParams p = at(0.4);
    p.g0 = 0.0;
    auto a = long_time_amplitudes(p, 6);
    double expect = p.Omega * p.Omega /
                    (p.delta_c * p.delta_c + 0.25 * p.gamma_c * p.gamma_c);
    CHECK(std::norm(a.c(1, 0)) == doctest::Approx(expect).epsilon(1e-14));
    for (int m = 1; m <= 6; ++m) CHECK(std::abs(a.c(1, m)) == 0.0);
}

TEST_CASE("probabilities sum squared sideband amplitudes") {
    AmplitudeSet a;
    a.m_max = 4;
    a.c = Eigen::MatrixXcd::Zero(4, 5);
    a.c(0, 0) = 1.0;
    auto pr = probabilities(a);
    CHECK(pr.P1 == 0.0);
    CHECK(pr.P2 == 0.0);
    CHECK(pr.P3 == 0.0);

    a.c(1, 0) = {0.3, -0.4};
    a.c(1, 2) = {0.0, 0.1};
    pr = probabilities(a);
    CHECK(pr.P1 == doctest::Approx(0.25 + 0.01).epsilon(1e-15));
}

TEST_CASE("weak-drive reductions") {
    CHECK(g2_weak(0.1, 0.005) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g3_weak(0.1, 0.001 / 6) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(g2_weak(0.0, 0.1), UndefinedCorrelation);
    CHECK_THROWS_AS(g3_weak(-1.0, 0.1), UndefinedCorrelation);
}

TEST_CASE("amplitude-route correlations at the reference detunings") {
    // frozen from this solver at m_max = 8; the zero-sideband closed form
    // gives 4.5 and 0.2647 here, the sidebands at g0 = 0.5 move both by
    // roughly their beta^2 share
    auto pk = probabilities(long_time_amplitudes(at(0.55), 8));
    CHECK(g2_weak(pk.P1, pk.P2) == doctest::Approx(3.994777).epsilon(1e-5));

    auto dip = probabilities(long_time_amplitudes(at(0.25), 8));
    CHECK(g2_weak(dip.P1, dip.P2) == doctest::Approx(0.328740).epsilon(1e-5));
}

TEST_CASE("sideband sums are converged at the default cutoff") {
    for (double dc : {-0.64, 0.25, 0.55}) {
        auto a = long_time_amplitudes(at(dc, 0.3), 8);
        CHECK(a.truncation_remainder >= 0.0);
        CHECK(a.truncation_remainder < 1e-3);
    }
}

TEST_CASE("first-order P1: exact limits and quadratic error law") {
    // g0 = 0 collapses both terms onto one Lorentzian
    SystemParams p = at(0.4);
    p.g0 = 0.0;
    CHECK(appendix_P1(p, true) ==
          doctest::Approx(p.Omega * p.Omega /
                          (0.4 * 0.4 + 0.25 * p.gamma_c * p.gamma_c))
              .epsilon(1e-14));

    // depends on delta_c only through the pump-shifted detuning
    SystemParams a = at(0.3), b = at(0.3 + 0.4, 0.4);  // delta = 2*0.5*0.4
    CHECK(appendix_P1(a, true) ==
          doctest::Approx(appendix_P1(b, true)).epsilon(1e-12));

    // agreement with the resummed amplitudes degrades as beta^2
    auto dev = [](double g0) {
        SystemParams q;
        q.delta_c = 0.25;
        q.g0 = g0;
        auto pr = probabilities(long_time_amplitudes(q, 8));
        return rel(appendix_P1(q, true), pr.P1);
    };
    double small = dev(0.05), large = dev(0.5);
    CHECK(small < 2.0 * 0.05 * 0.05);
    CHECK(small < 0.02 * large);  // quadratic scaling across a 10x coupling
}

TEST_CASE("first-order P3 branches") {
    SystemParams p = at(0.385);
    p.g0 = 0.05;
    double lead = appendix_P3(p, false);
    double full = appendix_P3(p, true);
    CHECK(full > lead);  // branches only add weight
    CHECK((full - lead) / lead < 2.0 * 0.05 * 0.05);

    // leading branch reproduces the zero-sideband closed form algebraically
    for (double dc : {-0.5, 0.1, 0.385}) {
        for (double G : {0.0, 0.3}) {
            SystemParams q = at(dc, G);
            double g3 = 6.0 * appendix_P3(q, false) /
                        std::pow(appendix_P1(q, false), 3);
            CHECK(g3 == doctest::Approx(g3_analytic(q)).epsilon(1e-10));
        }
    }
}

TEST_CASE("propagation from vacuum: conservation and stationarity") {
    SystemParams p = at(0.3, 0.2);
    p.Omega = 0.0;
    auto a = propagate_nonhermitian(p, 10.0, 0.009, 6);
    CHECK(a.survival == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(a.c(0, 0) - 1.0) < 1e-12);
    CHECK(a.c.bottomRows(3).norm() < 1e-12);

    CHECK_THROWS_AS(propagate_nonhermitian(at(0.3), 10.0, 0.5, 6),
                    ConfigError);

    // driven empty cavity settles onto the Lorentzian
    SystemParams flat = at(0.4);
    flat.g0 = 0.0;
    auto f = propagate_nonhermitian(flat, 20.0 / flat.gamma_c, 0.009, 6);
    double expect = flat.Omega * flat.Omega /
                    (0.4 * 0.4 + 0.25 * flat.gamma_c * flat.gamma_c);
    CHECK(std::norm(f.c(1, 0)) == doctest::Approx(expect).epsilon(0.01));
    CHECK(f.survival < 1.0);  // photons have leaked

    // full problem: propagation is the oracle for the stationary cascade
    auto stat = probabilities(long_time_amplitudes(at(0.22), 8));
    auto prop =
        probabilities(propagate_nonhermitian(at(0.22), 20.0 / 0.3, 0.009, 8));
    CHECK(rel(prop.P1, stat.P1) < 0.05);
    CHECK(rel(prop.P2, stat.P2) < 0.05);
    CHECK(rel(prop.P3, stat.P3) < 0.05);
}

TEST_CASE("correlation point composition") {
    auto pt = perturbative_point(at(0.385), 8);
    CHECK(pt.route == Route::perturbative);
    auto pr = probabilities(long_time_amplitudes(at(0.385), 8));
    CHECK(pt.g2 == g2_weak(pr.P1, pr.P2));
    CHECK(pt.g3 == g3_weak(pr.P1, pr.P3));
    CHECK(pt.mean_n ==
          doctest::Approx(pr.P1 + 2 * pr.P2 + 3 * pr.P3).epsilon(1e-15));
    CHECK(pt.label == Label::two_pb);

    CHECK_THROWS_AS(perturbative_point(at(0.3), 1), ConfigError);

    SystemParams dark = at(0.3);
    dark.Omega = 0.0;
    CHECK_THROWS_AS(perturbative_point(dark, 8), UndefinedCorrelation);
}

TEST_CASE("correlations are drive-independent in the weak-drive window") {
    SystemParams lo = at(0.55), hi = at(0.55);
    hi.Omega = 2.0 * lo.Omega;
    auto a = perturbative_point(lo, 8), b = perturbative_point(hi, 8);
    // the cascade is polynomial in Omega, so the ratios cancel exactly
    CHECK(a.g2 == doctest::Approx(b.g2).epsilon(1e-12));
    CHECK(a.g3 == doctest::Approx(b.g3).epsilon(1e-12));
}
