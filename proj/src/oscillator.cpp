#include "qhl/oscillator.hpp"

#include <cmath>
#include <stdexcept>

namespace qhl {

void ModeParams::validate() const {
    if (levels < 2) throw std::invalid_argument("ModeParams: need K >= 2 levels");
    if (!(tau2 > 0.0)) throw std::invalid_argument("ModeParams: tau2 must be > 0");
    for (size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0.0)) throw std::invalid_argument("ModeParams: s must be positive");
        if (i > 0 && s[i] < s[i - 1])
            throw std::invalid_argument("ModeParams: s must be non-decreasing");
    }
}

ModeParams ModeParams::linear(int modes, int levels, double tau2) {
    ModeParams p;
    p.tau2 = tau2;
    p.levels = levels;
    for (int i = 1; i <= modes; ++i) p.s.push_back(static_cast<double>(i));
    p.validate();
    return p;
}

ModeParams ModeParams::unit(int modes, int levels, double tau2) {
    ModeParams p;
    p.tau2 = tau2;
    p.levels = levels;
    p.s.assign(modes, 1.0);
    p.validate();
    return p;
}

ModeMatrices mode_matrices(int levels, double s, double tau2) {
    if (levels < 2) throw std::invalid_argument("mode_matrices: need K >= 2");
    if (!(s > 0.0 && tau2 > 0.0))
        throw std::invalid_argument("mode_matrices: s and tau2 must be > 0");
    ModeMatrices m;
    m.position = MatR::Zero(levels, levels);
    m.derivative = MatR::Zero(levels, levels);
    for (int k = 0; k + 1 < levels; ++k) {
        double x = std::sqrt(tau2 * (k + 1) / (2.0 * s));
        double d = std::sqrt(s * (k + 1) / (2.0 * tau2));
        m.position(k, k + 1) = x;
        m.position(k + 1, k) = x;
        m.derivative(k, k + 1) = d;
        m.derivative(k + 1, k) = -d;
    }
    return m;
}

BosonicState embed_vacuum(const BosonicState& state) {
    BosonicState out(state.modes + 1, state.levels);
    out.amp.head(state.amp.size()) = state.amp;
    return out;
}

Complex mode_inner(const BosonicState& a, const BosonicState& b) {
    if (a.modes != b.modes || a.levels != b.levels)
        throw std::invalid_argument("mode_inner: shape mismatch");
    return a.amp.dot(b.amp);
}

namespace {

template <typename Mat>
VecC apply_mode_matrix_impl(const VecC& amp, int modes, int levels, int mode,
                            const Mat& op) {
    if (mode < 0 || mode >= modes)
        throw std::invalid_argument("apply_mode_matrix: mode out of range");
    if (op.rows() != levels || op.cols() != levels)
        throw std::invalid_argument("apply_mode_matrix: operator shape mismatch");
    long stride = 1;
    for (int i = 0; i < mode; ++i) stride *= levels;
    const long block = stride * levels;
    VecC out = VecC::Zero(amp.size());
    for (long base = 0; base < amp.size(); base += block)
        for (long off = 0; off < stride; ++off)
            for (int r = 0; r < levels; ++r) {
                Complex acc = 0.0;
                for (int c = 0; c < levels; ++c)
                    acc += op(r, c) * amp[base + off + c * stride];
                out[base + off + r * stride] = acc;
            }
    return out;
}

} // namespace

VecC apply_mode_matrix(const VecC& amp, int modes, int levels, int mode,
                       const Eigen::Ref<const MatC>& op) {
    return apply_mode_matrix_impl(amp, modes, levels, mode, op);
}

VecC apply_mode_matrix_real(const VecC& amp, int modes, int levels, int mode,
                            const Eigen::Ref<const MatR>& op) {
    return apply_mode_matrix_impl(amp, modes, levels, mode, op);
}

} // namespace qhl
