#ifndef QHL_BOTT_DIRAC_HPP
#define QHL_BOTT_DIRAC_HPP

#include "qhl/fock.hpp"
#include "qhl/holonomy.hpp"
#include "qhl/operator.hpp"
#include "qhl/oscillator.hpp"
#include "qhl/sobolev.hpp"

#include <vector>

namespace qhl {

/// Truncated supersymmetric operator Σ_i (τ₂ c̄_i ⊗ D̂_i + s_i c_i ⊗ X̂_i) on
/// (⊗_{i<n} ℂ^K) ⊗ Λ*ℝⁿ. Basis index = fermion mask + 2ⁿ · boson index.
/// Real symmetric; anticommutes with fermion parity.
TruncatedOperator assemble_bott_dirac(int modes, int levels, const ModeParams& params,
                                      long max_dimension = (1L << 22));

/// Σ_i [(-τ₂²D̂² + s_i²X̂²) ⊗ 1 + τ₂ s_i (2N_i - 1)]: the closed form the
/// square takes away from the truncation edge.
TruncatedOperator bott_dirac_square_closed_form(int modes, int levels,
                                                const ModeParams& params);

/// States with every oscillator level ≤ K-1-margin (margin 2 = "below level
/// K-2 in every mode", where the square matches its closed form exactly).
std::vector<long> interior_state_indices(int modes, int levels, int margin = 2);

/// Compress a dense symmetric matrix to a subset of basis states.
Eigen::MatrixXd restrict_to_states(const Eigen::MatrixXd& m,
                                   const std::vector<long>& states);

/// B² compressed to the interior subspace (the object whose spectrum matches
/// the closed form {Σ_i 2τ₂ s_i (k_i + f_i)}).
Eigen::MatrixXd interior_square(const TruncatedOperator& bott, int modes, int levels,
                                int margin = 2);

/// m lowest eigenvalues, ascending. Dense solve for dim ≤ 4096, otherwise
/// Lanczos with full reorthogonalization and a fixed start vector.
/// Rejects operators not flagged self-adjoint.
std::vector<double> spectrum(const TruncatedOperator& op, int count);

struct SquareResidualReport {
    double interior_max = 0.0;        // both endpoints below level K-2; expected ≤ 1e-12
    double edge_max = 0.0;            // truncation-edge entries
    double below_top_level_max = 0.0; // both endpoints below level K-1
};

/// ‖B² - closed form‖ entrywise, split between the interior block and the
/// truncation edge.
SquareResidualReport verify_square_closed_form(int modes, int levels,
                                               const ModeParams& params);

/// Finite-difference probe of commutator boundedness: increments
/// γ_i = τ₂² ‖∂_{x_i} Hol(γ, Σ x_j ξ_j)|_{x=0}‖² and their running sum Γ(n).
struct CommutatorProfile {
    std::vector<double> lambda;     // eigenvalue of mode i
    std::vector<double> weight_sq;  // (1+τ₁λ_i^σ)^{-2}
    std::vector<double> increment;  // γ_i
    std::vector<double> gamma;      // Γ(n) = Σ_{i≤n} γ_i
};

CommutatorProfile commutator_growth_profile(const SobolevBasis& basis,
                                            const FlowPath& path, double tau2,
                                            int n_max, double fd_epsilon = 1e-4);

} // namespace qhl

#endif
