#ifndef QHL_FOCK_REP_HPP
#define QHL_FOCK_REP_HPP

#include "qhl/fock.hpp"
#include "qhl/qhd_rep.hpp"

namespace qhl {

/// Which inner-product structure the one-particle matrix is expressed in.
/// `conjugated` transports the L² action to H^σ through the unitary
/// (1+τ₁Δ^σ)^{-1}: in the ξ basis this is exactly the L²-orthonormal-basis
/// matrix, orthogonal for isometric flows. `plain` applies the action to
/// H^σ directly without the conjugation; its matrix picks up the weight
/// ratio w_i/w_j and fails orthogonality once the flow mixes eigenvalue
/// levels.
enum class SigmaWeighting { conjugated, plain };

/// Matrix of ω ↦ Hol·((e^{-tX})*ω)·Hol⁻¹ on the truncated H^σ basis.
/// Real (the action is real-linear on g-valued forms).
MatR one_particle_action(const VectorField& X, double t, const Connection& conn,
                         const SobolevBasis& basis,
                         SigmaWeighting weighting = SigmaWeighting::conjugated,
                         int flow_steps = 32);

/// Λ*H^σ ⊗ L²(A) amplitudes: flat index = fermion mask + 2^{n_f} · boson
/// multi-index (mode 0 fastest).
struct FockSectorState {
    int fermion_modes = 0;
    int boson_modes = 0;
    int levels = 0;
    VecC amp;

    FockSectorState() = default;
    FockSectorState(int nf, int nb, int K);

    static FockSectorState product(const FermionState& xi, const BosonicState& eta);

    long fermion_dim() const { return 1L << fermion_modes; }
    long boson_dim() const { return BosonicState::ipow(levels, boson_modes); }
    double norm() const { return amp.norm(); }

    /// Zero out amplitudes outside particle number k.
    FockSectorState sector(int k) const;
};

/// Λ F across all sectors on the fermionic factor; bosonic factor untouched.
FockSectorState fock_action(const MatC& one_particle, const FockSectorState& state);

/// Connection-dependent fiber-wise action: at each Gauss-Hermite node x over
/// A_n applies Λ(one-particle matrix at ∇ = Σ x_i ξ_i) and carries the
/// bosonic amplitude through.
FockSectorState combined_action(const VectorField& X, double t,
                                const FockSectorState& state,
                                const SobolevBasis& fermion_basis,
                                const SobolevBasis& boson_basis,
                                const ModeParams& params, const QuadratureSpec& quad,
                                SigmaWeighting weighting = SigmaWeighting::conjugated,
                                int flow_steps = 32);

/// Translation on the bosonic L²(A) factor only (Eq.-level: (ξ⊗η)(∇+ω)).
FockSectorState translate_bosonic_fock(const VecR& coords, const ModeParams& params,
                                       FockSectorState state);
FockSectorState translate_U_fock(const OneForm& omega, const SobolevBasis& basis,
                                 const ModeParams& params, const FockSectorState& state,
                                 double leak_threshold = 1e-8);

struct SectorNorms {
    std::vector<double> norm;           // operator norm of Λ^k F (measured)
    std::vector<double> svd_prediction; // product of the k largest singular values of F
};

/// Per-sector operator norms for k = 0..k_max.
SectorNorms sector_norm_bound(const MatC& one_particle, int k_max);

} // namespace qhl

#endif
