#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <string>

#include "correlation.hpp"
#include "fock.hpp"
#include "params.hpp"

namespace omb {

using SparseOperator = Eigen::SparseMatrix<std::complex<double>>;

// Density matrix on the photon (x) phonon tensor space.
struct DensityMatrix {
    Eigen::MatrixXcd data;  // d x d, d = n_a * n_b
    Truncation trunc;
    // ||L vec(rho)|| of the accepted solve; 0 for states built by hand.
    double residual = 0.0;
};

// Generator of the dissipative dynamics acting on column-stacked density
// matrices: vec(A X B) = (B^T (x) A) vec(X).
struct Superoperator {
    SparseOperator data;  // d^2 x d^2
    SystemParams params;
    Truncation trunc;
};

// Delta_c a'a + omega_m b'b + g0 a'a (b' + b) + G (b' + b) + Omega (a' + a)
// with the cavity mode leftmost in the tensor order.
ComplexOperator build_hamiltonian(const SystemParams& p, const Truncation& t);

// -i[H, .] plus photon loss at gamma_c, phonon loss at gamma_m (nbar + 1)
// and phonon gain at gamma_m nbar. The identity is a left null vector
// (trace preservation).
Superoperator liouvillian(const SystemParams& p, const Truncation& t);

// Null vector of L with unit trace. Solves the trace-pinned linear system,
// first with an incomplete-LU preconditioned BiCGSTAB, then with a direct
// sparse LU when the iterative residual is not at or below 1e-10, and as a
// last resort by time propagation until ||d rho/dt|| < 1e-12. The result is
// Hermitized, trace-normalized, and eigenvalue-clipped: eigenvalues in
// [-1e-10, 0) are set to zero, anything lower is an error.
DensityMatrix steady_state(const Superoperator& L);

// Throws unless rho is Hermitian to 1e-12, unit trace to 1e-12, and has no
// eigenvalue below -1e-10.
void validate(const DensityMatrix& rho);

// Photon-number populations P_n = sum_m <n,m|rho|n,m> and the normally
// ordered moments behind g2 and g3. Mean photon number below 1e-14 leaves
// the correlations undefined.
CorrelationPoint correlations_from_state(const DensityMatrix& rho,
                                         const Thresholds& th = {});

// Fourth-order integration of d vec(rho)/dt = L vec(rho). Requires
// dt <= 0.01 / max(omega_m, gamma_c, |delta_c|); trace is conserved to
// 1e-10 over the run.
DensityMatrix time_evolve(const DensityMatrix& rho0, const Superoperator& L,
                          double t_final, double dt);

// Correlation point for the master-equation route.
CorrelationPoint master_point(const SystemParams& p, const Truncation& t,
                              const Thresholds& th = {});

// Binary state dump: one JSON header line (params, truncation, layout),
// then d*d little-endian complex<double> pairs in row-major order.
void write_state_dump(const DensityMatrix& rho, const SystemParams& p,
                      std::ostream& os);
void write_state_dump(const DensityMatrix& rho, const SystemParams& p,
                      const std::string& path);
std::pair<DensityMatrix, SystemParams> read_state_dump(std::istream& is);

}  // namespace omb
