#ifndef QHL_OSCILLATOR_HPP
#define QHL_OSCILLATOR_HPP

#include "qhl/su_algebra.hpp"

#include <Eigen/Dense>
#include <vector>

namespace qhl {

using MatR = Eigen::MatrixXd;

/// Scaled one-mode Hilbert spaces: mode i carries the eigenbasis of
/// -τ₂²∂² + s_i²x², levels 0..K-1, ground state ∝ e^{-s_i x²/(2τ₂)}.
struct ModeParams {
    double tau2 = 1.0;
    std::vector<double> s; // monotone non-decreasing, one entry per mode
    int levels = 2;        // Hermite cutoff K

    int mode_count() const { return static_cast<int>(s.size()); }
    void validate() const;

    static ModeParams linear(int modes, int levels, double tau2 = 1.0); // s_i = i
    static ModeParams unit(int modes, int levels, double tau2 = 1.0);   // s_i = 1
};

/// K×K matrices of multiplication-by-x and d/dx in the s-scaled Hermite
/// basis. X̂ symmetric tridiagonal with X̂_{k,k+1} = √(τ₂(k+1)/(2s));
/// D̂ antisymmetric with D̂_{k,k+1} = √(s(k+1)/(2τ₂)).
struct ModeMatrices {
    MatR position;
    MatR derivative;
};

ModeMatrices mode_matrices(int levels, double s, double tau2);

/// State over ⊗_{i<n} span{level 0..K-1}; mode 0 has the fastest stride.
struct BosonicState {
    int modes = 0;
    int levels = 0;
    VecC amp;

    BosonicState() = default;
    BosonicState(int n, int K)
        : modes(n), levels(K), amp(VecC::Zero(ipow(K, n))) {}

    static long ipow(int base, int exp) {
        long r = 1;
        for (int i = 0; i < exp; ++i) r *= base;
        return r;
    }
    long dim() const { return amp.size(); }
    static BosonicState vacuum(int n, int K) {
        BosonicState st(n, K);
        st.amp[0] = 1.0;
        return st;
    }
    double norm() const { return amp.norm(); }
};

/// φ_n: tensor with the level-0 state of the appended mode. Exact isometry.
BosonicState embed_vacuum(const BosonicState& state);

/// Hermitian inner product ⟨η|ζ⟩ of amplitude vectors (equals the flat
/// integral by orthonormality of the mode bases). Rejects shape mismatch.
Complex mode_inner(const BosonicState& a, const BosonicState& b);

/// Apply a one-mode K×K matrix on mode `mode` of a multi-mode amplitude
/// vector (identity on the others).
VecC apply_mode_matrix(const VecC& amp, int modes, int levels, int mode,
                       const Eigen::Ref<const MatC>& op);
VecC apply_mode_matrix_real(const VecC& amp, int modes, int levels, int mode,
                            const Eigen::Ref<const MatR>& op);

} // namespace qhl

#endif
