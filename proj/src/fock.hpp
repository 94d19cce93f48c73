#pragma once

#include <complex>

#include <Eigen/Dense>

#include "errors.hpp"

namespace omb {

// Photon/phonon level counts for the tensor space and the phonon cutoff for
// the amplitude expansion. n_a >= 4 so three-photon moments have headroom.
struct Truncation {
    int n_a = 6;
    int n_b = 12;
    int m_max = 8;
};

void validate(const Truncation& t);

// Dense complex matrix with tensor-factor metadata. Single-mode operators
// carry dim_b = 0; two-mode operators have rows() == dim_a * dim_b with the
// cavity factor leftmost.
struct ComplexOperator {
    Eigen::MatrixXcd data;
    int dim_a = 0;
    int dim_b = 0;
};

// Truncated annihilation operator: <n-1|a|n> = sqrt(n).
ComplexOperator annihilation(int dim);

ComplexOperator identity(int dim);

// Kronecker product, cavity factor leftmost.
ComplexOperator tensor(const ComplexOperator& lhs, const ComplexOperator& rhs);

// Matrix element <l| exp[alpha (b^dag - b)] |k> of the displacement operator,
// fixed convention D(alpha) = exp[alpha (b^dag - b)] so that D(alpha)|0> is
// the coherent state with amplitude alpha. Closed form via generalized
// Laguerre polynomials:
//   l >= k:  sqrt(k!/l!) (+alpha)^(l-k) e^(-alpha^2/2) L_k^(l-k)(alpha^2)
//   l <  k:  sqrt(l!/k!) (-alpha)^(k-l) e^(-alpha^2/2) L_l^(k-l)(alpha^2)
// Evaluated with a three-term recurrence; factorial ratios via lgamma.
double displaced_overlap(int l, int k, double alpha);

// First-order expansion of the same convention:
//   delta_{l,k} + alpha (sqrt(k+1) delta_{l,k+1} - sqrt(k) delta_{l,k-1}).
double displaced_overlap_first_order(int l, int k, double alpha);

// Matrix exponential of alpha (b^dag - b) on the truncated space. Slow and
// truncation-limited; used as an independent cross-check of
// displaced_overlap, not in any production path.
ComplexOperator displacement_matrix(int dim, double alpha);

}  // namespace omb
