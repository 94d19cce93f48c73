#include "fock.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace omb {

void validate(const Truncation& t) {
    if (t.n_a < 4)
        throw ConfigError("n_a must be >= 4 (three-photon moments need headroom)");
    if (t.n_b < 2) throw ConfigError("n_b must be >= 2");
    if (t.m_max < 2)
        throw ConfigError("m_max must be >= 2 (two-phonon sidebands required)");
}

ComplexOperator annihilation(int dim) {
    if (dim < 1) throw ConfigError("annihilation: dim must be >= 1");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return {a, dim, 0};
}

ComplexOperator identity(int dim) {
    if (dim < 1) throw ConfigError("identity: dim must be >= 1");
    return {Eigen::MatrixXcd::Identity(dim, dim), dim, 0};
}

ComplexOperator tensor(const ComplexOperator& lhs, const ComplexOperator& rhs) {
    if (lhs.data.rows() != lhs.data.cols() || rhs.data.rows() != rhs.data.cols())
        throw ConfigError("tensor: operands must be square");
    Eigen::MatrixXcd out = Eigen::kroneckerProduct(lhs.data, rhs.data);
    return {out, int(lhs.data.rows()), int(rhs.data.rows())};
}

// L_n^(s)(x) by upward recurrence in n.
static double laguerre(int n, int s, double x) {
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + s - x;
    for (int j = 1; j < n; ++j) {
        double lp1 = ((2.0 * j + 1.0 + s - x) * l - (j + s) * lm1) / (j + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

double displaced_overlap(int l, int k, double alpha) {
    if (l < 0 || k < 0) throw ConfigError("displaced_overlap: indices must be >= 0");
    if (alpha == 0.0) return l == k ? 1.0 : 0.0;

    int lo = std::min(l, k), hi = std::max(l, k);
    int diff = hi - lo;
    // sqrt(lo!/hi!) * |alpha|^diff * exp(-alpha^2/2), assembled in log space.
    double logmag = 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0)) +
                    diff * std::log(std::abs(alpha)) - 0.5 * alpha * alpha;
    double base = l >= k ? alpha : -alpha;  // (+alpha)^(l-k) or (-alpha)^(k-l)
    double sign = (base < 0 && diff % 2 == 1) ? -1.0 : 1.0;
    return sign * std::exp(logmag) * laguerre(lo, diff, alpha * alpha);
}

double displaced_overlap_first_order(int l, int k, double alpha) {
    if (l < 0 || k < 0)
        throw ConfigError("displaced_overlap_first_order: indices must be >= 0");
    double v = l == k ? 1.0 : 0.0;
    if (l == k + 1) v += alpha * std::sqrt(k + 1.0);
    if (l == k - 1) v -= alpha * std::sqrt(double(k));
    return v;
}

ComplexOperator displacement_matrix(int dim, double alpha) {
    if (dim < 1) throw ConfigError("displacement_matrix: dim must be >= 1");
    ComplexOperator b = annihilation(dim);
    Eigen::MatrixXcd x = alpha * (b.data.adjoint() - b.data);
    return {x.exp(), dim, 0};
}

}  // namespace omb
