#ifndef QHL_OPERATOR_HPP
#define QHL_OPERATOR_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>

namespace qhl {

/// Names the tensor-product basis an operator acts on so compositions are
/// checked: oscillator levels per mode, mode count, fermion mode count, and
/// an optional lattice-spinor factor.
struct BasisDescriptor {
    int boson_modes = 0;
    int boson_levels = 0;
    int fermion_modes = 0;
    long lattice_spinor_dim = 0; // 0 = absent

    long dimension() const {
        long d = 1;
        for (int i = 0; i < boson_modes; ++i) d *= boson_levels;
        d <<= fermion_modes;
        if (lattice_spinor_dim > 0) d *= lattice_spinor_dim;
        return d;
    }
    bool operator==(const BasisDescriptor&) const = default;
    std::string str() const;
};

/// Finite matrix acting on a declared basis. Sparse storage (dense contents
/// are fine at desk scale); real entries cover every operator assembled here.
struct TruncatedOperator {
    Eigen::SparseMatrix<double> mat;
    BasisDescriptor basis;
    bool self_adjoint = false;

    long dim() const { return mat.rows(); }
    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(mat); }

    void check_same_basis(const TruncatedOperator& other, const char* what) const {
        if (!(basis == other.basis))
            throw std::invalid_argument(std::string(what) +
                                        ": basis descriptor mismatch (" + basis.str() +
                                        " vs " + other.basis.str() + ")");
    }

    TruncatedOperator compose(const TruncatedOperator& other) const;
    TruncatedOperator add(const TruncatedOperator& other) const;
    TruncatedOperator anticommutator_with(const TruncatedOperator& other) const;

    /// Verify the flagged Hermiticity on the stored matrix.
    double self_adjointness_defect() const;
};

} // namespace qhl

#endif
