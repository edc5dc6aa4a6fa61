#ifndef QHL_QHD_REP_HPP
#define QHL_QHD_REP_HPP

#include "qhl/holonomy.hpp"
#include "qhl/oscillator.hpp"
#include "qhl/sobolev.hpp"

#include <vector>

namespace qhl {

/// State on L²(A_n) ⊗ L²(M, ℂⁿ) at truncation: bosonic occupation basis
/// tensored with the lattice spinor. Flat index = color + rep·(site + sites·b)
/// with b the bosonic multi-index (mode 0 fastest).
struct YMState {
    int boson_modes = 0;
    int levels = 0;
    LatticeTorus torus;
    int rep_dim = 0;
    VecC amp;

    YMState() = default;
    YMState(int n, int K, const LatticeTorus& t, int rep);

    static YMState product(const BosonicState& eta, const LatticeSpinor& psi);

    long boson_dim() const { return BosonicState::ipow(levels, boson_modes); }
    long spinor_dim() const { return torus.site_count() * static_cast<long>(rep_dim); }

    double norm() const { return std::sqrt(torus.cell_volume()) * amp.norm(); }
    Complex inner(const YMState& other) const {
        return torus.cell_volume() * amp.dot(other.amp);
    }
};

/// Tensor Gauss-Hermite quadrature over A_n, matched to the mode Gaussians.
/// `check` reruns at a higher order and rejects results that moved more than
/// `check_tolerance`.
struct QuadratureSpec {
    int order = 8;
    bool check = false;
    double check_tolerance = 1e-6;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LeakageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Translation U_ω on the bosonic factor: exp(Σ ω_i ∂_i) realized per mode as
/// the exponential of the truncated derivative matrix (orthogonal, so the
/// group law is exact; faithfulness to the untruncated translation degrades
/// only at the truncation edge). Identity on the spinor factor.
YMState translate_bosonic(const VecR& coords, const ModeParams& params, YMState state);

/// U_ω for a one-form: expands ω in the basis, rejects relative leakage above
/// the threshold with a diagnostic.
YMState translate_U(const OneForm& omega, const SobolevBasis& basis,
                    const ModeParams& params, const YMState& state,
                    double leak_threshold = 1e-8);

/// (f e^X Ψ): at each quadrature node x over A_n, transports the spinor
/// factor with ∇ = Σ x_i ξ_i (+ optional offset), assembled through the
/// weighted Hermite-node sandwich. Pass empty f for the global element e^X.
YMState act_holonomy_diffeo_ym(const SiteFunction& f, const VectorField& X, double t,
                               const YMState& psi, const SobolevBasis& basis,
                               const ModeParams& params, const QuadratureSpec& quad,
                               const OneForm* connection_offset = nullptr,
                               bool unitarize = true, int flow_steps = 32);

struct WeylReport {
    double residual_minus = 0.0; // ‖(U_ω⁻¹ e^X U_ω - e^X[∇ ↦ ∇ - ω])Ψ‖, worst probe
    double residual_plus = 0.0;
    int best_sign = 0;           // sign with the smaller residual
    double best_residual = 0.0;
};

/// Conjugation test U_ω⁻¹ e^X U_ω vs e^X with the connection shifted by ±ω.
WeylReport weyl_conjugation_check(const VectorField& X, double t, const OneForm& omega,
                                  const std::vector<YMState>& probes,
                                  const SobolevBasis& basis, const ModeParams& params,
                                  const QuadratureSpec& quad, int flow_steps = 32);

/// ‖U_{tω}Ψ - Ψ‖ for each t (t_list decreasing to 0 in the intended use).
std::vector<double> strong_continuity_profile(const VecR& omega_coords,
                                              const std::vector<double>& t_list,
                                              const ModeParams& params,
                                              const YMState& psi);

} // namespace qhl

#endif
