#ifndef QHL_QUADRATURE_HPP
#define QHL_QUADRATURE_HPP

#include <Eigen/Dense>
#include <vector>

namespace qhl {

/// Gauss-Hermite rule for ∫ f(y) e^{-y²} dy ≈ Σ w_q f(y_q), nodes ascending.
/// Golub-Welsch on the Hermite Jacobi matrix.
struct GaussHermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

GaussHermiteRule gauss_hermite(int order);

/// Orthonormal Hermite functions h_k(y) e^{-y²/2}-free form: values of the
/// polynomials h_k (orthonormal under e^{-y²} dy) at y, k = 0..count-1.
Eigen::VectorXd hermite_orthonormal_values(int count, double y);

/// Odometer over a multi-index in {0..base-1}^digits. Returns false when the
/// index wraps back to zero.
bool advance_multi_index(std::vector<int>& index, int base);

} // namespace qhl

#endif
