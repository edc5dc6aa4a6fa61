#include "qhl/operator.hpp"

#include <sstream>

namespace qhl {

std::string BasisDescriptor::str() const {
    std::ostringstream os;
    os << "[boson " << boson_modes << "x" << boson_levels << ", fermion "
       << fermion_modes;
    if (lattice_spinor_dim > 0) os << ", spinor " << lattice_spinor_dim;
    os << "]";
    return os.str();
}

TruncatedOperator TruncatedOperator::compose(const TruncatedOperator& other) const {
    check_same_basis(other, "compose");
    TruncatedOperator out;
    out.mat = mat * other.mat;
    out.basis = basis;
    out.self_adjoint = false;
    return out;
}

TruncatedOperator TruncatedOperator::add(const TruncatedOperator& other) const {
    check_same_basis(other, "add");
    TruncatedOperator out;
    out.mat = mat + other.mat;
    out.basis = basis;
    out.self_adjoint = self_adjoint && other.self_adjoint;
    return out;
}

TruncatedOperator TruncatedOperator::anticommutator_with(
    const TruncatedOperator& other) const {
    check_same_basis(other, "anticommutator");
    TruncatedOperator out;
    out.mat = Eigen::SparseMatrix<double>(mat * other.mat) +
              Eigen::SparseMatrix<double>(other.mat * mat);
    out.basis = basis;
    out.self_adjoint = false;
    return out;
}

double TruncatedOperator::self_adjointness_defect() const {
    Eigen::SparseMatrix<double> d = mat - Eigen::SparseMatrix<double>(mat.transpose());
    double worst = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(d, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

} // namespace qhl
