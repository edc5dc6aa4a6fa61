#include "qhl/su_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace qhl {

std::vector<MatC> su_basis(int n) {
    if (n < 2) throw std::invalid_argument("su_basis: need n >= 2");
    const Complex I(0.0, 1.0);
    std::vector<MatC> basis;
    basis.reserve(n * n - 1);
    // Symmetric off-diagonal family.
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            MatC g = MatC::Zero(n, n);
            g(j, k) = 1.0;
            g(k, j) = 1.0;
            basis.push_back(0.5 * I * g);
        }
    // Antisymmetric family.
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            MatC g = MatC::Zero(n, n);
            g(j, k) = -I;
            g(k, j) = I;
            basis.push_back(0.5 * I * g);
        }
    // Diagonal family.
    for (int l = 1; l < n; ++l) {
        MatC g = MatC::Zero(n, n);
        double norm = std::sqrt(2.0 / (l * (l + 1.0)));
        for (int j = 0; j < l; ++j) g(j, j) = norm;
        g(l, l) = -l * norm;
        basis.push_back(0.5 * I * g);
    }
    return basis;
}

double anti_hermiticity_defect(const MatC& a) {
    return (a + a.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace qhl
