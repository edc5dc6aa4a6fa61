#ifndef QHL_HOLONOMY_HPP
#define QHL_HOLONOMY_HPP

#include "qhl/gauge_field.hpp"

#include <functional>
#include <optional>

namespace qhl {

/// Scalar prefactor f for local algebra elements f e^X; empty = global (f ≡ 1).
using SiteFunction = std::function<Complex(const Vec3&)>;

/// Parallel transport along a sampled path: the ordered product of
/// exp(-ω(midpoint)·Δx) over segments, earliest segment rightmost. Increments
/// are exponentials of anti-Hermitian matrices, so the result is unitary, and
/// reversing the sample list yields the exact matrix inverse.
MatC holonomy(const FlowPath& path, const Connection& conn);

struct HolonomyDiffeoOptions {
    int flow_steps = 32;
    bool unitarize = true; // multiply by flow_jacobian^{1/2}
};

/// The operator (f e^X_∇ ψ)(m') = f(m) · jac^{1/2} · Hol(γ,∇) ψ(m) with
/// m = exp_t(-X)(m') and γ the flow segment from m to m'. Pass an empty
/// SiteFunction for the global algebra element e^X.
LatticeSpinor apply_holonomy_diffeo(const SiteFunction& f, const VectorField& X,
                                    double t, const Connection& conn,
                                    const LatticeSpinor& psi,
                                    const HolonomyDiffeoOptions& opt = {});

/// Adjoint action on g-valued one-forms:
/// (e^X_∇ ω)(m₂) = Hol(γ,∇) · ((e^{-tX})*ω)(m₂) · Hol(γ,∇)^{-1}.
/// At ∇ = 0 this reduces exactly to pullback_oneform.
OneForm adjoint_flow_on_oneform(const VectorField& X, double t,
                                const Connection& conn, const OneForm& omega,
                                int flow_steps = 32);

/// Geometry of the inverse flow per target site, reusable across connections:
/// source point, backward-flow Jacobian determinant, forward path to the site.
struct TransportGeometry {
    LatticeTorus torus;
    double t = 0.0;
    std::vector<Vec3> source;       // m = exp_t(-X)(m') per target site
    std::vector<double> inv_jac;    // det D(exp_t(-X)) at m'
    std::vector<FlowPath> path;     // forward path m -> m'
    std::vector<Mat3> pullback_jac; // D(exp_t(-X)) at m' (for one-form pullback)
};

TransportGeometry transport_geometry(const LatticeTorus& torus, const VectorField& X,
                                     double t, int flow_steps);

/// apply_holonomy_diffeo with precomputed geometry (connection varies).
LatticeSpinor apply_holonomy_diffeo_geom(const SiteFunction& f,
                                         const TransportGeometry& geom,
                                         const Connection& conn,
                                         const LatticeSpinor& psi,
                                         bool unitarize = true);

OneForm adjoint_flow_on_oneform_geom(const TransportGeometry& geom,
                                     const Connection& conn, const OneForm& omega);

/// Fused transport kernel for connections of the form Σ x_i ξ_i + offset with
/// the flow geometry fixed: per-segment generator matrices of every basis
/// direction are contracted once, so evaluating the transport at a new
/// coordinate vector is pure matrix arithmetic (no interpolation).
class NodeTransportEngine {
  public:
    NodeTransportEngine(const TransportGeometry& geom,
                        const std::vector<OneForm>& directions,
                        const OneForm* offset = nullptr);

    int rep_dim() const { return rep_dim_; }

    /// Transport source amplitudes: out(site) = jac^{1/2} f(m) U(site) ψ(m).
    void apply(const Eigen::Ref<const VecC>& coords, const SiteFunction& f,
               bool unitarize, const VecC& psi_amp, VecC& out_amp) const;

    /// Transport matrix at one site for the given coordinates.
    MatC site_transport(const Eigen::Ref<const VecC>& coords, int site) const;

  private:
    const TransportGeometry* geom_;
    int rep_dim_ = 0;
    int directions_ = 0;
    bool has_offset_ = false;
    std::vector<int> seg_offset_;   // per site: first segment slot
    std::vector<MatC> generators_;  // [slot * (directions+offset?) + i]
    struct SourceStencil {
        int corner[8];
        double weight[8];
    };
    std::vector<SourceStencil> source_;
};

} // namespace qhl

#endif
