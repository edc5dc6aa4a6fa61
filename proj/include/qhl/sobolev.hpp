#ifndef QHL_SOBOLEV_HPP
#define QHL_SOBOLEV_HPP

#include "qhl/dec.hpp"
#include "qhl/gauge_field.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace qhl {

/// Regulator scale τ₁ and Laplacian power σ of the Sobolev inner product
/// ⟨ω₁|ω₂⟩_s = ⟨(1+τ₁Δ^σ)ω₁, (1+τ₁Δ^σ)ω₂⟩_{L²}.
struct SobolevParams {
    double tau1 = 1.0;
    double sigma = 1.0;

    void validate() const;
    double weight(double lambda) const; // 1 + τ₁ λ^σ
};

/// One Fourier eigenmode of the scalar one-form Laplacian, tagged for the
/// deterministic degeneracy tie-break: eigenvalue, canonical signed wave
/// vector, cos/sin, axis.
struct ScalarModeKey {
    double lambda = 0.0;
    Eigen::Vector3i k = Eigen::Vector3i::Zero();
    int trig = 0; // 0 = cos, 1 = sin
    int axis = 0;
};

/// All 3N³ scalar one-form eigenmodes, ordered by
/// (λ, k lexicographic, cos before sin, axis).
std::vector<ScalarModeKey> scalar_mode_keys(const LatticeTorus& torus);

/// Site values of the (k, trig) Fourier function, L²(h³)-normalized.
VecR scalar_mode_site_values(const LatticeTorus& torus, const Eigen::Vector3i& k,
                             int trig);

/// L²-orthonormal scalar one-form eigenvector for a key (3N³ entries).
VecR scalar_mode_vector(const LatticeTorus& torus, const ScalarModeKey& key);

/// Spectral calculus on g-valued one-forms: ω ↦ Σ_i fn(λ_i) ⟨e_i,ω⟩ e_i over
/// the full eigenbasis (componentwise on the Lie factor).
GaugeOneForm spectral_apply(const GaugeOneForm& omega,
                            const std::function<double(double)>& fn);

/// (1 + τ₁Δ^σ) ω.
GaugeOneForm apply_sobolev_weight(const GaugeOneForm& omega, const SobolevParams& p);

/// Plain L² pairing: h³ Σ_{x,a} (ω₁, ω₂)_g with (A,B)_g = -2 tr(AB) on su(n).
Complex l2_inner(const GaugeOneForm& w1, const GaugeOneForm& w2);
double l2_norm(const GaugeOneForm& w);

/// ⟨ω₁|ω₂⟩_s, evaluated literally as the h³-weighted site sum of the
/// pointwise pairing of the weighted forms. Rejects mismatched lattices.
Complex sobolev_inner(const GaugeOneForm& w1, const GaugeOneForm& w2,
                      const SobolevParams& p);
double sobolev_norm(const GaugeOneForm& w, const SobolevParams& p);

/// Truncated orthonormal eigenbasis {ξ_i} of Ω¹(M ⊗ g) under the Sobolev
/// product: ξ_i = e_i / (1+τ₁λ_i^σ) with e_i the L²-orthonormal Hodge
/// eigenforms (scalar Fourier mode ⊗ su(n) generator). Degeneracies are
/// resolved by the fixed key order (λ, k lex, cos/sin, axis, Lie index).
class SobolevBasis {
  public:
    struct ModeInfo {
        double lambda = 0.0;
        Eigen::Vector3i k = Eigen::Vector3i::Zero();
        int trig = 0;
        int axis = 0;
        int lie = 0;
    };

    SobolevBasis() = default;
    SobolevBasis(const LatticeTorus& torus, int rep_dim, const SobolevParams& params,
                 int truncation);

    const LatticeTorus& torus() const { return torus_; }
    int rep_dim() const { return rep_dim_; }
    const SobolevParams& params() const { return params_; }
    int size() const { return static_cast<int>(modes_.size()); }

    double lambda(int i) const { return modes_[i].lambda; }
    double weight(int i) const { return params_.weight(modes_[i].lambda); }
    const ModeInfo& info(int i) const { return modes_[i]; }
    const VecR& scalar(int i) const { return scalar_[i]; }
    const MatC& generator(int lie) const { return generators_[lie]; }

    /// Sobolev-orthonormal basis vector ξ_i, materialized.
    OneForm xi(int i) const;
    /// L²-orthonormal eigenform e_i = (1+τ₁λ_i^σ) ξ_i.
    OneForm eigenform(int i) const;

    /// Sobolev coordinates c_i = ⟨ξ_i|ω⟩_s of the truncated expansion.
    VecR coefficients(const GaugeOneForm& omega) const;
    /// Plain L² coordinates ⟨e_i|ω⟩ (used by the σ-conjugated Fock action).
    VecR l2_coefficients(const GaugeOneForm& omega) const;

    /// Σ x_i ξ_i as a point of the configuration space.
    Connection coords_to_connection(const VecR& x) const;

    /// Relative Sobolev-norm leakage of ω outside the truncated span.
    double relative_leakage(const GaugeOneForm& omega) const;

    /// Sub-basis with the given mode indices (order preserved).
    SobolevBasis select(const std::vector<int>& indices) const;

    /// Replace a stored mode (cache loading).
    void overwrite_mode(int i, const ModeInfo& info, const VecR& scalar) {
        modes_.at(i) = info;
        scalar_.at(i) = scalar;
    }

  private:
    LatticeTorus torus_;
    int rep_dim_ = 0;
    SobolevParams params_;
    std::vector<ModeInfo> modes_;
    std::vector<VecR> scalar_;
    std::vector<MatC> generators_;
};

/// pre: truncation ≤ 3 N³ (n² - 1)
SobolevBasis build_sobolev_basis(const LatticeTorus& torus, const SobolevParams& params,
                                 int truncation, int rep_dim = 2);

/// Cache file (versioned JSON header + binary eigenvalues/vectors).
void save_sobolev_basis(const SobolevBasis& basis, const std::string& path);
SobolevBasis load_sobolev_basis(const std::string& path);

} // namespace qhl

#endif
