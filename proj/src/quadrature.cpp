#include "qhl/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace qhl {

GaussHermiteRule gauss_hermite(int order) {
    if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        double b = std::sqrt(k / 2.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    GaussHermiteRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(order);
    const double mu0 = std::sqrt(M_PI); // ∫ e^{-y²} dy
    for (int q = 0; q < order; ++q) {
        double v0 = es.eigenvectors()(0, q);
        rule.weights[q] = mu0 * v0 * v0;
    }
    return rule;
}

Eigen::VectorXd hermite_orthonormal_values(int count, double y) {
    Eigen::VectorXd h(count);
    if (count < 1) return h;
    h[0] = 1.0 / std::pow(M_PI, 0.25);
    if (count > 1) h[1] = std::sqrt(2.0) * y * h[0];
    for (int k = 1; k + 1 < count; ++k)
        h[k + 1] = std::sqrt(2.0 / (k + 1.0)) * y * h[k] -
                   std::sqrt(k / (k + 1.0)) * h[k - 1];
    return h;
}

bool advance_multi_index(std::vector<int>& index, int base) {
    for (size_t i = 0; i < index.size(); ++i) {
        if (++index[i] < base) return true;
        index[i] = 0;
    }
    return false;
}

} // namespace qhl
