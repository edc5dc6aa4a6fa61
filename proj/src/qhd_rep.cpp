#include "qhl/qhd_rep.hpp"

#include "qhl/quadrature.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace qhl {

YMState::YMState(int n, int K, const LatticeTorus& t, int rep)
    : boson_modes(n), levels(K), torus(t), rep_dim(rep) {
    amp = VecC::Zero(boson_dim() * spinor_dim());
}

YMState YMState::product(const BosonicState& eta, const LatticeSpinor& psi) {
    YMState st(eta.modes, eta.levels, psi.torus, psi.rep_dim);
    const long sd = st.spinor_dim();
    for (long b = 0; b < eta.dim(); ++b)
        st.amp.segment(b * sd, sd) = eta.amp[b] * psi.amp;
    return st;
}

namespace {

// Apply a rectangular matrix (rows=new extent, cols=old extent) along one
// tensor dimension of a flat amplitude vector; dims fastest-first.
VecC tensor_mode_apply(const VecC& amp, std::vector<long>& dims, int dim_index,
                       const MatC& op) {
    const long old_extent = dims[dim_index];
    const long new_extent = op.rows();
    if (op.cols() != old_extent)
        throw std::invalid_argument("tensor_mode_apply: extent mismatch");
    long stride = 1;
    for (int i = 0; i < dim_index; ++i) stride *= dims[i];
    long outer = 1;
    for (size_t i = dim_index + 1; i < dims.size(); ++i) outer *= dims[i];

    VecC out = VecC::Zero(stride * new_extent * outer);
    for (long o = 0; o < outer; ++o) {
        const long in_base = o * stride * old_extent;
        const long out_base = o * stride * new_extent;
        for (long r = 0; r < new_extent; ++r)
            for (long c = 0; c < old_extent; ++c) {
                const Complex v = op(r, c);
                if (v == Complex(0.0)) continue;
                out.segment(out_base + r * stride, stride) +=
                    v * amp.segment(in_base + c * stride, stride);
            }
    }
    dims[dim_index] = new_extent;
    return out;
}

MatR mode_derivative(const ModeParams& params, int levels, int mode) {
    return mode_matrices(levels, params.s.at(mode), params.tau2).derivative;
}

// Weighted synthesis matrix A(q,k) = √w_q h_k(y_q): A†A = 1 for order ≥ K,
// so the node sandwich Aᵀ M A is the Galerkin compression of a node-diagonal
// operator.
MatR synthesis_matrix(const GaussHermiteRule& rule, int levels) {
    MatR a(rule.nodes.size(), levels);
    for (int q = 0; q < rule.nodes.size(); ++q) {
        Eigen::VectorXd h = hermite_orthonormal_values(levels, rule.nodes[q]);
        a.row(q) = std::sqrt(rule.weights[q]) * h.transpose();
    }
    return a;
}

} // namespace

YMState translate_bosonic(const VecR& coords, const ModeParams& params, YMState state) {
    params.validate();
    if (coords.size() != state.boson_modes)
        throw std::invalid_argument("translate_bosonic: coordinate count mismatch");
    if (params.mode_count() < state.boson_modes)
        throw std::invalid_argument("translate_bosonic: not enough mode parameters");
    std::vector<long> dims;
    dims.push_back(state.spinor_dim());
    for (int i = 0; i < state.boson_modes; ++i) dims.push_back(state.levels);
    for (int i = 0; i < state.boson_modes; ++i) {
        if (coords[i] == 0.0) continue;
        MatR t = (coords[i] * mode_derivative(params, state.levels, i)).exp();
        state.amp = tensor_mode_apply(state.amp, dims, 1 + i, t.cast<Complex>());
    }
    return state;
}

YMState translate_U(const OneForm& omega, const SobolevBasis& basis,
                    const ModeParams& params, const YMState& state,
                    double leak_threshold) {
    if (basis.size() != state.boson_modes)
        throw std::invalid_argument("translate_U: basis truncation != bosonic modes");
    double leak = basis.relative_leakage(omega);
    if (leak > leak_threshold)
        throw LeakageError("translate_U: one-form leaks " + std::to_string(leak) +
                           " (relative, Sobolev norm) outside the truncated basis; "
                           "threshold " + std::to_string(leak_threshold) +
                           ". Increase the truncation or project the form first.");
    return translate_bosonic(basis.coefficients(omega), params, state);
}

namespace {

YMState act_core(const SiteFunction& f, const NodeTransportEngine& engine,
                 const YMState& psi, const SobolevBasis& basis,
                 const ModeParams& params, int order, bool unitarize) {
    const int n = psi.boson_modes;
    const int K = psi.levels;
    if (order < K)
        throw QuadratureError("act_holonomy_diffeo_ym: quadrature order " +
                              std::to_string(order) + " below the mode cutoff " +
                              std::to_string(K) +
                              "; the node sandwich needs order >= K.");

    GaussHermiteRule rule = gauss_hermite(order);
    // Forward transform to weighted node values, mode by mode.
    std::vector<long> dims;
    dims.push_back(psi.spinor_dim());
    std::vector<double> node_scale(n);
    MatR synth = synthesis_matrix(rule, K);
    VecC amp = psi.amp;
    for (int i = 0; i < n; ++i) {
        node_scale[i] = std::sqrt(params.tau2 / params.s.at(i));
        dims.push_back(K);
    }
    for (int i = 0; i < n; ++i)
        amp = tensor_mode_apply(amp, dims, 1 + i, synth.cast<Complex>());

    // Per node: transport the spinor slice with ∇ = Σ x_i ξ_i (+ offset).
    const long sd = psi.spinor_dim();
    std::vector<int> q(n, 0);
    VecC x(n);
    VecC slice(sd), moved(sd);
    long node_index = 0;
    do {
        for (int i = 0; i < n; ++i) x[i] = node_scale[i] * rule.nodes[q[i]];
        slice = amp.segment(node_index * sd, sd);
        engine.apply(x, f, unitarize, slice, moved);
        amp.segment(node_index * sd, sd) = moved;
        ++node_index;
    } while (advance_multi_index(q, order));

    // Back to Hermite coefficients.
    for (int i = 0; i < n; ++i)
        amp = tensor_mode_apply(amp, dims, 1 + i, synth.transpose().cast<Complex>());

    YMState out(psi.boson_modes, psi.levels, psi.torus, psi.rep_dim);
    out.amp = std::move(amp);
    return out;
}

} // namespace

YMState act_holonomy_diffeo_ym(const SiteFunction& f, const VectorField& X, double t,
                               const YMState& psi, const SobolevBasis& basis,
                               const ModeParams& params, const QuadratureSpec& quad,
                               const OneForm* connection_offset, bool unitarize,
                               int flow_steps) {
    params.validate();
    if (basis.size() != psi.boson_modes)
        throw std::invalid_argument(
            "act_holonomy_diffeo_ym: basis truncation != bosonic modes");
    if (!(basis.torus() == psi.torus))
        throw std::invalid_argument("act_holonomy_diffeo_ym: lattice mismatch");
    TransportGeometry geom = transport_geometry(psi.torus, X, t, flow_steps);
    std::vector<OneForm> directions;
    directions.reserve(basis.size());
    for (int i = 0; i < basis.size(); ++i) directions.push_back(basis.xi(i));
    NodeTransportEngine engine(geom, directions, connection_offset);
    YMState out = act_core(f, engine, psi, basis, params, quad.order, unitarize);
    if (quad.check) {
        YMState refined = act_core(f, engine, psi, basis, params, quad.order + 4,
                                   unitarize);
        double drift = std::sqrt(psi.torus.cell_volume()) *
                       (refined.amp - out.amp).norm();
        if (drift > quad.check_tolerance)
            throw QuadratureError(
                "act_holonomy_diffeo_ym: quadrature order " + std::to_string(quad.order) +
                " is not converged (drift " + std::to_string(drift) + " > tolerance " +
                std::to_string(quad.check_tolerance) + "); raise the order.");
    }
    return out;
}

WeylReport weyl_conjugation_check(const VectorField& X, double t, const OneForm& omega,
                                  const std::vector<YMState>& probes,
                                  const SobolevBasis& basis, const ModeParams& params,
                                  const QuadratureSpec& quad, int flow_steps) {
    WeylReport rep;
    const VecR coords = basis.coefficients(omega);
    for (const YMState& psi : probes) {
        YMState up = translate_bosonic(coords, params, psi);
        YMState mid = act_holonomy_diffeo_ym({}, X, t, up, basis, params, quad, nullptr,
                                             true, flow_steps);
        YMState lhs = translate_bosonic(-coords, params, mid);

        for (int sign : {-1, +1}) {
            OneForm shifted = omega;
            shifted *= static_cast<double>(sign);
            YMState rhs = act_holonomy_diffeo_ym({}, X, t, psi, basis, params, quad,
                                                 &shifted, true, flow_steps);
            double r = std::sqrt(psi.torus.cell_volume()) * (lhs.amp - rhs.amp).norm();
            if (sign < 0)
                rep.residual_minus = std::max(rep.residual_minus, r);
            else
                rep.residual_plus = std::max(rep.residual_plus, r);
        }
    }
    rep.best_sign = rep.residual_minus <= rep.residual_plus ? -1 : +1;
    rep.best_residual = std::min(rep.residual_minus, rep.residual_plus);
    return rep;
}

std::vector<double> strong_continuity_profile(const VecR& omega_coords,
                                              const std::vector<double>& t_list,
                                              const ModeParams& params,
                                              const YMState& psi) {
    std::vector<double> out;
    out.reserve(t_list.size());
    for (double t : t_list) {
        YMState moved = translate_bosonic(t * omega_coords, params, psi);
        out.push_back(std::sqrt(psi.torus.cell_volume()) * (moved.amp - psi.amp).norm());
    }
    return out;
}

} // namespace qhl
