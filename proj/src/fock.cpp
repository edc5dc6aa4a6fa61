#include "qhl/fock.hpp"

#include <stdexcept>

namespace qhl {

namespace {

void check_mode(int i, int modes) {
    if (i < 0 || i >= modes)
        throw std::invalid_argument("fock: mode index out of range");
}

} // namespace

FermionState ext_basis(int i, const FermionState& st) {
    check_mode(i, st.modes);
    FermionState out(st.modes);
    const FockMask bit = FockMask{1} << i;
    const long dim = st.dim();
    for (long mi = 0; mi < dim; ++mi) {
        const FockMask m = static_cast<FockMask>(mi);
        if (st.amp[mi] == Complex(0.0)) continue;
        if (m & bit) continue; // v ∧ v = 0
        double sign = (popcount_below(m, i) & 1) ? -1.0 : 1.0;
        out.amp[m | bit] += sign * st.amp[mi];
    }
    return out;
}

FermionState int_basis(int i, const FermionState& st) {
    check_mode(i, st.modes);
    FermionState out(st.modes);
    const FockMask bit = FockMask{1} << i;
    const long dim = st.dim();
    for (long mi = 0; mi < dim; ++mi) {
        const FockMask m = static_cast<FockMask>(mi);
        if (st.amp[mi] == Complex(0.0)) continue;
        if (!(m & bit)) continue;
        double sign = (popcount_below(m, i) & 1) ? -1.0 : 1.0;
        out.amp[m & ~bit] += sign * st.amp[mi];
    }
    return out;
}

FermionState ext_vector(const VecC& v, const FermionState& st) {
    if (v.size() != st.modes)
        throw std::invalid_argument("ext_vector: vector length mismatch");
    FermionState out(st.modes);
    for (int i = 0; i < st.modes; ++i) {
        if (v[i] == Complex(0.0)) continue;
        out.amp += v[i] * ext_basis(i, st).amp;
    }
    return out;
}

FermionState int_vector(const VecC& v, const FermionState& st) {
    if (v.size() != st.modes)
        throw std::invalid_argument("int_vector: vector length mismatch");
    FermionState out(st.modes);
    for (int i = 0; i < st.modes; ++i) {
        if (v[i] == Complex(0.0)) continue;
        out.amp += std::conj(v[i]) * int_basis(i, st).amp;
    }
    return out;
}

Eigen::MatrixXd ext_matrix(int i, int modes) {
    check_mode(i, modes);
    const long dim = 1L << modes;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    const FockMask bit = FockMask{1} << i;
    for (long ci = 0; ci < dim; ++ci) {
        const FockMask c = static_cast<FockMask>(ci);
        if (c & bit) continue;
        double sign = (popcount_below(c, i) & 1) ? -1.0 : 1.0;
        m(c | bit, ci) = sign;
    }
    return m;
}

Eigen::MatrixXd int_matrix(int i, int modes) {
    return ext_matrix(i, modes).transpose();
}

Eigen::MatrixXd clifford_c(int i, int modes) {
    Eigen::MatrixXd e = ext_matrix(i, modes);
    return e + e.transpose();
}

Eigen::MatrixXd clifford_cbar(int i, int modes) {
    Eigen::MatrixXd e = ext_matrix(i, modes);
    return e - e.transpose();
}

Eigen::MatrixXd number_operator(int i, int modes) {
    check_mode(i, modes);
    const long dim = 1L << modes;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    const FockMask bit = FockMask{1} << i;
    for (long c = 0; c < dim; ++c)
        if (static_cast<FockMask>(c) & bit) m(c, c) = 1.0;
    return m;
}

Eigen::MatrixXd fermion_parity(int modes) {
    const long dim = 1L << modes;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (long c = 0; c < dim; ++c)
        m(c, c) = (__builtin_popcount(static_cast<FockMask>(c)) & 1) ? -1.0 : 1.0;
    return m;
}

std::vector<FockMask> sector_masks(int modes, int k) {
    if (k < 0 || k > modes)
        throw std::invalid_argument("sector_masks: particle number out of range");
    std::vector<FockMask> masks;
    for (FockMask m = 0; m < (FockMask{1} << modes); ++m)
        if (__builtin_popcount(m) == k) masks.push_back(m);
    return masks;
}

namespace {

std::vector<int> mask_indices(FockMask m) {
    std::vector<int> idx;
    for (int i = 0; m; ++i, m >>= 1)
        if (m & 1) idx.push_back(i);
    return idx;
}

} // namespace

MatC exterior_power_map(const MatC& f, int k) {
    const int n = static_cast<int>(f.rows());
    if (f.cols() != n) throw std::invalid_argument("exterior_power_map: square input");
    if (k < 0 || k > n)
        throw std::invalid_argument("exterior_power_map: k exceeds mode count");
    if (k == 0) return MatC::Ones(1, 1);
    const auto masks = sector_masks(n, k);
    const int dim = static_cast<int>(masks.size());
    MatC out(dim, dim);
    std::vector<std::vector<int>> idx(dim);
    for (int a = 0; a < dim; ++a) idx[a] = mask_indices(masks[a]);
    MatC minor(k, k);
    for (int col = 0; col < dim; ++col)
        for (int row = 0; row < dim; ++row) {
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) minor(r, c) = f(idx[row][r], idx[col][c]);
            out(row, col) = k == 1 ? minor(0, 0) : minor.determinant();
        }
    return out;
}

FermionState apply_exterior_power(const MatC& f, const FermionState& st) {
    if (f.rows() != st.modes)
        throw std::invalid_argument("apply_exterior_power: mode count mismatch");
    FermionState out(st.modes);
    out.amp[0] = st.amp[0]; // Λ⁰ is the scalar 1
    for (int k = 1; k <= st.modes; ++k) {
        const auto masks = sector_masks(st.modes, k);
        MatC lk = exterior_power_map(f, k);
        for (size_t col = 0; col < masks.size(); ++col) {
            const Complex a = st.amp[masks[col]];
            if (a == Complex(0.0)) continue;
            for (size_t row = 0; row < masks.size(); ++row)
                out.amp[masks[row]] += lk(row, col) * a;
        }
    }
    return out;
}

} // namespace qhl
