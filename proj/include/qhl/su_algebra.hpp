#ifndef QHL_SU_ALGEBRA_HPP
#define QHL_SU_ALGEBRA_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qhl {

using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Pairing on g-valued matrices: -2 tr(AB) on anti-Hermitian arguments,
/// extended sesquilinearly as 2 tr(A† B). Positive definite on su(n).
inline Complex lie_inner(const MatC& a, const MatC& b) {
    return 2.0 * (a.adjoint() * b).trace();
}

/// Orthonormal basis of su(n) under lie_inner: T_a = i g_a / 2 with g_a the
/// generalized Gell-Mann matrices (symmetric, antisymmetric, then diagonal
/// family), so -2 tr(T_a T_b) = δ_ab. dim = n² - 1.
std::vector<MatC> su_basis(int n);

/// Largest |entry| of A + A†; zero for anti-Hermitian A.
double anti_hermiticity_defect(const MatC& a);

} // namespace qhl

#endif
