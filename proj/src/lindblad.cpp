#include "lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include <json.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "errors.hpp"

namespace omb {

namespace {

using std::complex;
using SpMat = SparseOperator;

constexpr complex<double> kI{0.0, 1.0};

// c rho c' - 1/2 {c'c, rho} in the column-stacking convention.
SpMat dissipator(const SpMat& c) {
    const int d = int(c.rows());
    SpMat id(d, d);
    id.setIdentity();
    const SpMat cc = (SpMat(c.adjoint()) * c).pruned();
    SpMat out = kroneckerProduct(SpMat(c.conjugate()), c);
    out -= 0.5 * SpMat(kroneckerProduct(id, cc));
    out -= 0.5 * SpMat(kroneckerProduct(SpMat(cc.transpose()), id));
    return out;
}

Eigen::Map<const Eigen::VectorXcd> vec_of(const Eigen::MatrixXcd& m) {
    return {m.data(), m.size()};
}

// Hermitize, trace-normalize, and clip eigenvalue dust. Eigenvalues below
// -1e-10 mean the solve failed rather than accumulated roundoff.
Eigen::MatrixXcd repair(Eigen::MatrixXcd rho) {
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double tr = rho.trace().real();
    if (!(std::abs(tr) > 1e-8) || !std::isfinite(tr))
        throw NumericalError("steady-state solve returned a traceless state");
    rho /= tr;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigenvalue decomposition of the state failed");
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() >= 0.0) return rho;
    if (ev.minCoeff() < -1e-10)
        throw NumericalError("steady state has eigenvalue below -1e-10");
    for (int i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), 0.0);
    ev /= ev.sum();
    return es.eigenvectors() * ev.asDiagonal() *
           es.eigenvectors().adjoint();
}

// Trace-pinned linear system: row 0 of L is replaced by the trace
// functional so the null vector comes out normalized.
SpMat trace_pinned(const SpMat& L, int d) {
    std::vector<Eigen::Triplet<complex<double>>> trips;
    trips.reserve(size_t(L.nonZeros()) + size_t(d));
    for (int k = 0; k < L.outerSize(); ++k)
        for (SpMat::InnerIterator it(L, k); it; ++it)
            if (it.row() != 0) trips.emplace_back(int(it.row()), int(it.col()), it.value());
    for (int k = 0; k < d; ++k) trips.emplace_back(0, k * d + k, 1.0);
    SpMat A(L.rows(), L.cols());
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    return A;
}

}  // namespace

ComplexOperator build_hamiltonian(const SystemParams& p, const Truncation& t) {
    validate(p);
    validate(t);
    const ComplexOperator a = tensor(annihilation(t.n_a), identity(t.n_b));
    const ComplexOperator b = tensor(identity(t.n_a), annihilation(t.n_b));
    const Eigen::MatrixXcd na = a.data.adjoint() * a.data;
    const Eigen::MatrixXcd xb = b.data.adjoint() + b.data;

    ComplexOperator H;
    H.dim_a = t.n_a;
    H.dim_b = t.n_b;
    H.data = p.delta_c * na + p.omega_m * (b.data.adjoint() * b.data) +
             p.g0 * na * xb + p.G * xb +
             p.Omega * (a.data.adjoint() + a.data);
    return H;
}

Superoperator liouvillian(const SystemParams& p, const Truncation& t) {
    validate(p);
    validate(t);
    const int d = t.n_a * t.n_b;

    const SpMat a =
        tensor(annihilation(t.n_a), identity(t.n_b)).data.sparseView();
    const SpMat b =
        tensor(identity(t.n_a), annihilation(t.n_b)).data.sparseView();
    const SpMat H = build_hamiltonian(p, t).data.sparseView();
    SpMat id(d, d);
    id.setIdentity();

    SpMat L = (-kI) * SpMat(kroneckerProduct(id, H));
    L += kI * SpMat(kroneckerProduct(SpMat(H.transpose()), id));
    L += p.gamma_c * dissipator(a);
    if (p.gamma_m > 0.0) {
        L += (p.gamma_m * (p.nbar_m + 1.0)) * dissipator(b);
        if (p.nbar_m > 0.0)
            L += (p.gamma_m * p.nbar_m) * dissipator(SpMat(b.adjoint()));
    }
    L.makeCompressed();
    return {std::move(L), p, t};
}

DensityMatrix steady_state(const Superoperator& L) {
    const int d = L.trunc.n_a * L.trunc.n_b;
    const SpMat A = trace_pinned(L.data, d);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(A.rows());
    rhs(0) = 1.0;

    Eigen::VectorXcd x;
    bool solved = false;

    {
        Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<complex<double>>> it;
        it.preconditioner().setDroptol(1e-5);
        it.preconditioner().setFillfactor(20);
        it.setTolerance(1e-13);
        it.setMaxIterations(400);
        it.compute(A);
        if (it.info() == Eigen::Success) {
            x = it.solve(rhs);
            solved = (A * x - rhs).norm() <= 1e-10;
        }
    }

    if (!solved) {
        Eigen::SparseLU<SpMat> lu;
        lu.compute(A);
        if (lu.info() == Eigen::Success) {
            x = lu.solve(rhs);
            solved = (A * x - rhs).norm() <= 1e-10;
        }
    }

    DensityMatrix out;
    out.trunc = L.trunc;

    if (!solved) {
        // Last resort: relax from the vacuum until the generator output is
        // numerically zero. Bounded so a degenerate or drifting problem
        // surfaces as an error instead of an endless run.
        DensityMatrix rho;
        rho.trunc = L.trunc;
        rho.data = Eigen::MatrixXcd::Zero(d, d);
        rho.data(0, 0) = 1.0;
        const double rate = std::max(
            {L.params.omega_m, L.params.gamma_c, std::abs(L.params.delta_c)});
        const double dt = 0.009 / rate;
        const double chunk = 50.0 / L.params.gamma_c;
        for (int iter = 0; iter < 50 && !solved; ++iter) {
            rho = time_evolve(rho, L, chunk, dt);
            solved = (L.data * vec_of(rho.data)).norm() < 1e-12;
        }
        if (!solved)
            throw NumericalError(
                "steady-state solve hit the iteration limit; the generator "
                "may have a degenerate null space");
        out.data = repair(rho.data);
        out.residual = (L.data * vec_of(out.data)).norm();
        return out;
    }

    out.data = repair(Eigen::Map<Eigen::MatrixXcd>(x.data(), d, d));
    out.residual = (L.data * vec_of(out.data)).norm();
    return out;
}

void validate(const DensityMatrix& rho) {
    const int d = rho.trunc.n_a * rho.trunc.n_b;
    if (rho.data.rows() != d || rho.data.cols() != d)
        throw NumericalError("density matrix shape does not match truncation");
    if ((rho.data - rho.data.adjoint()).norm() > 1e-12)
        throw NumericalError("density matrix is not Hermitian to 1e-12");
    if (std::abs(rho.data.trace() - 1.0) > 1e-12)
        throw NumericalError("density matrix trace is not 1 to 1e-12");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.data,
                                                       Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw NumericalError("density matrix has eigenvalue below -1e-10");
}

CorrelationPoint correlations_from_state(const DensityMatrix& rho,
                                         const Thresholds& th) {
    const int na = rho.trunc.n_a;
    const int nb = rho.trunc.n_b;
    if (rho.data.rows() != na * nb)
        throw NumericalError("density matrix shape does not match truncation");

    std::vector<double> Pn(na, 0.0);
    for (int n = 0; n < na; ++n)
        for (int m = 0; m < nb; ++m)
            Pn[n] += rho.data(n * nb + m, n * nb + m).real();

    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (int n = 1; n < na; ++n) {
        m1 += double(n) * Pn[n];
        m2 += double(n) * double(n - 1) * Pn[n];
        m3 += double(n) * double(n - 1) * double(n - 2) * Pn[n];
    }
    if (m1 < 1e-14)
        throw UndefinedCorrelation("mean photon number below 1e-14");

    CorrelationPoint out;
    out.P1 = Pn[1];
    out.P2 = Pn[2];
    out.P3 = na > 3 ? Pn[3] : 0.0;
    out.mean_n = m1;
    out.g2 = m2 / (m1 * m1);
    out.g3 = m3 / (m1 * m1 * m1);
    out.route = Route::master;
    out.label = classify(out.g2, out.g3, th);
    return out;
}

DensityMatrix time_evolve(const DensityMatrix& rho0, const Superoperator& L,
                          double t_final, double dt) {
    if (!(t_final >= 0.0) || !(dt > 0.0))
        throw ConfigError("t_final must be nonnegative and dt positive");
    const double rate = std::max(
        {L.params.omega_m, L.params.gamma_c, std::abs(L.params.delta_c)});
    if (dt > 0.01 / rate)
        throw ConfigError("dt too coarse for the fastest system timescale");
    const int d = L.trunc.n_a * L.trunc.n_b;
    if (rho0.data.rows() != d || rho0.data.cols() != d)
        throw ConfigError("initial state shape does not match truncation");

    Eigen::VectorXcd y = vec_of(rho0.data);
    if (t_final > 0.0) {
        const long steps = static_cast<long>(std::ceil(t_final / dt));
        const double h = t_final / double(steps);
        Eigen::VectorXcd k1, k2, k3, k4;
        for (long s = 0; s < steps; ++s) {
            k1 = L.data * y;
            k2 = L.data * (y + 0.5 * h * k1);
            k3 = L.data * (y + 0.5 * h * k2);
            k4 = L.data * (y + h * k3);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }

    DensityMatrix out;
    out.trunc = L.trunc;
    out.data = Eigen::Map<Eigen::MatrixXcd>(y.data(), d, d);
    out.residual = (L.data * y).norm();
    return out;
}

CorrelationPoint master_point(const SystemParams& p, const Truncation& t,
                              const Thresholds& th) {
    return correlations_from_state(steady_state(liouvillian(p, t)), th);
}

void write_state_dump(const DensityMatrix& rho, const SystemParams& p,
                      std::ostream& os) {
    nlohmann::json header;
    header["layout"] = "row-major";
    header["scalar"] = "complex128-le";
    header["dim_a"] = rho.trunc.n_a;
    header["dim_b"] = rho.trunc.n_b;
    header["params"] = nlohmann::json::parse(params_to_json(p));
    os << header.dump() << "\n";

    std::vector<double> buf;
    buf.reserve(size_t(rho.data.size()) * 2);
    for (int i = 0; i < rho.data.rows(); ++i)
        for (int j = 0; j < rho.data.cols(); ++j) {
            buf.push_back(rho.data(i, j).real());
            buf.push_back(rho.data(i, j).imag());
        }
    os.write(reinterpret_cast<const char*>(buf.data()),
             std::streamsize(buf.size() * sizeof(double)));
}

void write_state_dump(const DensityMatrix& rho, const SystemParams& p,
                      const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open state dump file: " + path);
    write_state_dump(rho, p, os);
    if (!os) throw NumericalError("state dump write failed: " + path);
}

std::pair<DensityMatrix, SystemParams> read_state_dump(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw ConfigError("state dump is missing its header line");
    const nlohmann::json header = nlohmann::json::parse(line);
    DensityMatrix rho;
    rho.trunc.n_a = header.at("dim_a").get<int>();
    rho.trunc.n_b = header.at("dim_b").get<int>();
    const SystemParams p = params_from_json(header.at("params").dump());

    const int d = rho.trunc.n_a * rho.trunc.n_b;
    std::vector<double> buf(size_t(d) * size_t(d) * 2);
    is.read(reinterpret_cast<char*>(buf.data()),
            std::streamsize(buf.size() * sizeof(double)));
    if (!is) throw ConfigError("state dump payload is truncated");
    rho.data.resize(d, d);
    size_t k = 0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j, k += 2)
            rho.data(i, j) = {buf[k], buf[k + 1]};
    return {std::move(rho), p};
}

}  // namespace omb
