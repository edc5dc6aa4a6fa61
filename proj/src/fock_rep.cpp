#include "qhl/fock_rep.hpp"

#include "qhl/quadrature.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace qhl {

MatR one_particle_action(const VectorField& X, double t, const Connection& conn,
                         const SobolevBasis& basis, SigmaWeighting weighting,
                         int flow_steps) {
    const int n = basis.size();
    TransportGeometry geom = transport_geometry(basis.torus(), X, t, flow_steps);
    MatR f(n, n);
    for (int j = 0; j < n; ++j) {
        OneForm image = adjoint_flow_on_oneform_geom(geom, conn, basis.eigenform(j));
        f.col(j) = basis.l2_coefficients(image);
    }
    if (weighting == SigmaWeighting::plain) {
        // ⟨ξ_i, Φ ξ_j⟩_s = (w_i / w_j) ⟨e_i, Φ e_j⟩_{L²}
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) f(i, j) *= basis.weight(i) / basis.weight(j);
    }
    return f;
}

FockSectorState::FockSectorState(int nf, int nb, int K)
    : fermion_modes(nf), boson_modes(nb), levels(K) {
    amp = VecC::Zero(fermion_dim() * boson_dim());
}

FockSectorState FockSectorState::product(const FermionState& xi,
                                         const BosonicState& eta) {
    FockSectorState st(xi.modes, eta.modes, eta.levels);
    const long fd = st.fermion_dim();
    for (long b = 0; b < eta.dim(); ++b)
        st.amp.segment(b * fd, fd) = eta.amp[b] * xi.amp;
    return st;
}

FockSectorState FockSectorState::sector(int k) const {
    FockSectorState out = *this;
    const long fd = fermion_dim();
    for (long b = 0; b < boson_dim(); ++b)
        for (long m = 0; m < fd; ++m)
            if (__builtin_popcount(static_cast<FockMask>(m)) != k)
                out.amp[b * fd + m] = 0.0;
    return out;
}

FockSectorState fock_action(const MatC& one_particle, const FockSectorState& state) {
    if (one_particle.rows() != state.fermion_modes)
        throw std::invalid_argument("fock_action: one-particle size mismatch");
    FockSectorState out = state;
    const long fd = state.fermion_dim();
    FermionState slice(state.fermion_modes);
    for (long b = 0; b < state.boson_dim(); ++b) {
        slice.amp = state.amp.segment(b * fd, fd);
        out.amp.segment(b * fd, fd) = apply_exterior_power(one_particle, slice).amp;
    }
    return out;
}

namespace {

MatR synthesis_matrix_fock(const GaussHermiteRule& rule, int levels) {
    MatR a(rule.nodes.size(), levels);
    for (int q = 0; q < rule.nodes.size(); ++q) {
        Eigen::VectorXd h = hermite_orthonormal_values(levels, rule.nodes[q]);
        a.row(q) = std::sqrt(rule.weights[q]) * h.transpose();
    }
    return a;
}

VecC tensor_boson_apply(const VecC& amp, long fermion_dim, std::vector<long>& bdims,
                        int mode, const MatR& op) {
    const long old_extent = bdims[mode];
    const long new_extent = op.rows();
    long stride = fermion_dim;
    for (int i = 0; i < mode; ++i) stride *= bdims[i];
    long outer = 1;
    for (size_t i = mode + 1; i < bdims.size(); ++i) outer *= bdims[i];

    VecC out = VecC::Zero(stride * new_extent * outer);
    for (long o = 0; o < outer; ++o) {
        const long in_base = o * stride * old_extent;
        const long out_base = o * stride * new_extent;
        for (long r = 0; r < new_extent; ++r)
            for (long c = 0; c < old_extent; ++c) {
                const double v = op(r, c);
                if (v == 0.0) continue;
                out.segment(out_base + r * stride, stride) +=
                    v * amp.segment(in_base + c * stride, stride);
            }
    }
    bdims[mode] = new_extent;
    return out;
}

} // namespace

FockSectorState combined_action(const VectorField& X, double t,
                                const FockSectorState& state,
                                const SobolevBasis& fermion_basis,
                                const SobolevBasis& boson_basis,
                                const ModeParams& params, const QuadratureSpec& quad,
                                SigmaWeighting weighting, int flow_steps) {
    params.validate();
    if (boson_basis.size() != state.boson_modes)
        throw std::invalid_argument("combined_action: boson basis != bosonic modes");
    if (fermion_basis.size() != state.fermion_modes)
        throw std::invalid_argument("combined_action: fermion basis != fermion modes");
    if (quad.order < state.levels)
        throw QuadratureError("combined_action: quadrature order below mode cutoff");

    GaussHermiteRule rule = gauss_hermite(quad.order);
    MatR synth = synthesis_matrix_fock(rule, state.levels);
    const int nb = state.boson_modes;
    std::vector<double> node_scale(nb);
    for (int i = 0; i < nb; ++i) node_scale[i] = std::sqrt(params.tau2 / params.s.at(i));

    std::vector<long> bdims(nb, state.levels);
    VecC amp = state.amp;
    for (int i = 0; i < nb; ++i)
        amp = tensor_boson_apply(amp, state.fermion_dim(), bdims, i, synth);

    TransportGeometry geom = transport_geometry(fermion_basis.torus(), X, t, flow_steps);
    const long fd = state.fermion_dim();
    std::vector<int> q(nb, 0);
    VecR x(nb);
    long node_index = 0;
    FermionState slice(state.fermion_modes);
    do {
        for (int i = 0; i < nb; ++i) x[i] = node_scale[i] * rule.nodes[q[i]];
        Connection conn = boson_basis.coords_to_connection(x);
        MatR f(fermion_basis.size(), fermion_basis.size());
        for (int j = 0; j < fermion_basis.size(); ++j) {
            OneForm image =
                adjoint_flow_on_oneform_geom(geom, conn, fermion_basis.eigenform(j));
            f.col(j) = fermion_basis.l2_coefficients(image);
        }
        if (weighting == SigmaWeighting::plain)
            for (int i = 0; i < f.rows(); ++i)
                for (int j = 0; j < f.cols(); ++j)
                    f(i, j) *= fermion_basis.weight(i) / fermion_basis.weight(j);
        slice.amp = amp.segment(node_index * fd, fd);
        amp.segment(node_index * fd, fd) =
            apply_exterior_power(f.cast<Complex>(), slice).amp;
        ++node_index;
    } while (advance_multi_index(q, quad.order));

    for (int i = 0; i < nb; ++i)
        amp = tensor_boson_apply(amp, state.fermion_dim(), bdims, i,
                                 synth.transpose());

    FockSectorState out(state.fermion_modes, state.boson_modes, state.levels);
    out.amp = std::move(amp);
    return out;
}

FockSectorState translate_bosonic_fock(const VecR& coords, const ModeParams& params,
                                       FockSectorState state) {
    params.validate();
    if (coords.size() != state.boson_modes)
        throw std::invalid_argument("translate_bosonic_fock: coordinate count mismatch");
    std::vector<long> bdims(state.boson_modes, state.levels);
    for (int i = 0; i < state.boson_modes; ++i) {
        if (coords[i] == 0.0) continue;
        MatR t = (coords[i] *
                  mode_matrices(state.levels, params.s.at(i), params.tau2).derivative)
                     .exp();
        state.amp = tensor_boson_apply(state.amp, state.fermion_dim(), bdims, i, t);
    }
    return state;
}

FockSectorState translate_U_fock(const OneForm& omega, const SobolevBasis& basis,
                                 const ModeParams& params, const FockSectorState& state,
                                 double leak_threshold) {
    if (basis.size() != state.boson_modes)
        throw std::invalid_argument("translate_U_fock: basis truncation mismatch");
    double leak = basis.relative_leakage(omega);
    if (leak > leak_threshold)
        throw LeakageError("translate_U_fock: one-form leaks " + std::to_string(leak) +
                           " outside the truncated basis (threshold " +
                           std::to_string(leak_threshold) + ")");
    return translate_bosonic_fock(basis.coefficients(omega), params, state);
}

SectorNorms sector_norm_bound(const MatC& one_particle, int k_max) {
    const int n = static_cast<int>(one_particle.rows());
    if (k_max < 0 || k_max > n)
        throw std::invalid_argument("sector_norm_bound: k_max out of range");
    Eigen::JacobiSVD<MatC> svd(one_particle);
    SectorNorms out;
    double prod = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        if (k == 0) {
            out.norm.push_back(1.0);
            out.svd_prediction.push_back(1.0);
            continue;
        }
        MatC lk = exterior_power_map(one_particle, k);
        out.norm.push_back(Eigen::JacobiSVD<MatC>(lk).singularValues()(0));
        prod *= svd.singularValues()(k - 1);
        out.svd_prediction.push_back(prod);
    }
    return out;
}

} // namespace qhl
