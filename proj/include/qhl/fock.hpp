#ifndef QHL_FOCK_HPP
#define QHL_FOCK_HPP

#include "qhl/su_algebra.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace qhl {

using FockMask = std::uint32_t; // bit i set ⇔ basis vector v_i present

/// Λ*ℝⁿ amplitudes over occupation bitmasks, ascending-index normal form.
struct FermionState {
    int modes = 0;
    VecC amp;

    FermionState() = default;
    explicit FermionState(int n) : modes(n), amp(VecC::Zero(1u << n)) {}

    static FermionState vacuum(int n) {
        FermionState st(n);
        st.amp[0] = 1.0;
        return st;
    }
    long dim() const { return amp.size(); }
    double norm() const { return amp.norm(); }
};

inline int popcount_below(FockMask mask, int i) {
    return __builtin_popcount(mask & ((FockMask{1} << i) - 1));
}

/// Wedge by basis vector v_i / its adjoint; signs are exact integers.
FermionState ext_basis(int i, const FermionState& st);
FermionState int_basis(int i, const FermionState& st);

/// ext(v) = Σ v_i ext(v_i); int(v) = ext(v)† = Σ conj(v_i) int(v_i).
FermionState ext_vector(const VecC& v, const FermionState& st);
FermionState int_vector(const VecC& v, const FermionState& st);

/// Dense matrices over the full 2ⁿ space (real: entries are 0, ±1).
Eigen::MatrixXd ext_matrix(int i, int modes);
Eigen::MatrixXd int_matrix(int i, int modes);

/// Clifford generators c_i = ext+int (self-adjoint, c² = 1) and
/// c̄_i = ext-int (anti-self-adjoint, c̄² = -1).
Eigen::MatrixXd clifford_c(int i, int modes);
Eigen::MatrixXd clifford_cbar(int i, int modes);

/// Mode occupation N_i = ext_i int_i and parity (-1)^N.
Eigen::MatrixXd number_operator(int i, int modes);
Eigen::MatrixXd fermion_parity(int modes);

template <typename Mat>
Mat anticommutator(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("anticommutator: shape mismatch");
    return a * b + b * a;
}

/// Masks with popcount k, ascending (the k-particle sector basis order).
std::vector<FockMask> sector_masks(int modes, int k);

/// Λ^k F on the (n choose k)-dimensional sector: entries are k×k minors of F.
/// pre: k ≤ n. Λ⁰ = [1].
MatC exterior_power_map(const MatC& f, int k);

/// Apply Λ F across all sectors of a fermion state (Λ⁰ acts as 1 on the
/// vacuum component).
FermionState apply_exterior_power(const MatC& f, const FermionState& st);

} // namespace qhl

#endif
