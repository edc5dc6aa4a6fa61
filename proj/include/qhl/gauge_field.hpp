#ifndef QHL_GAUGE_FIELD_HPP
#define QHL_GAUGE_FIELD_HPP

#include "qhl/lattice.hpp"
#include "qhl/su_algebra.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qhl {

/// g-valued one-form sampled on lattice sites: one anti-Hermitian rep_dim ×
/// rep_dim matrix per site per axis. Doubles as a point of the configuration
/// space (a Connection) and as a tangent direction (an OneForm); the two are
/// added and scaled freely.
class GaugeOneForm {
  public:
    GaugeOneForm() = default;
    GaugeOneForm(const LatticeTorus& torus, int rep_dim);

    static GaugeOneForm zero(const LatticeTorus& torus, int rep_dim) {
        return GaugeOneForm(torus, rep_dim);
    }

    const LatticeTorus& torus() const { return torus_; }
    int rep_dim() const { return rep_dim_; }

    MatC& at(int axis, int site) { return comp_[axis * torus_.site_count() + site]; }
    const MatC& at(int axis, int site) const {
        return comp_[axis * torus_.site_count() + site];
    }

    /// Trilinear interpolation of the axis component at an arbitrary point.
    /// Real convex weights, so anti-Hermiticity is preserved.
    MatC sample(int axis, const Vec3& p) const;

    /// Value contracted with a tangent vector: Σ_a ω_a(p) v_a.
    MatC contract(const Vec3& p, const Vec3& v) const;

    GaugeOneForm& operator+=(const GaugeOneForm& other);
    GaugeOneForm& operator*=(double scale);
    friend GaugeOneForm operator+(GaugeOneForm a, const GaugeOneForm& b) {
        a += b;
        return a;
    }
    friend GaugeOneForm operator*(double s, GaugeOneForm a) {
        a *= s;
        return a;
    }

    /// Max |entry| of A + A† over all components.
    double anti_hermiticity_defect() const;
    /// Max |entry| difference against another form.
    double max_abs_diff(const GaugeOneForm& other) const;

    bool same_lattice(const GaugeOneForm& other) const {
        return torus_ == other.torus_ && rep_dim_ == other.rep_dim_;
    }

  private:
    LatticeTorus torus_;
    int rep_dim_ = 0;
    std::vector<MatC> comp_; // axis-major: comp_[axis * site_count + site]
};

using Connection = GaugeOneForm;
using OneForm = GaugeOneForm;

/// Discretized section of L²(M) ⊗ ℂⁿ: amplitude in ℂⁿ per site, flat index
/// site * rep_dim + color. Norm is weighted by the cell volume h³.
struct LatticeSpinor {
    LatticeTorus torus;
    int rep_dim = 0;
    VecC amp;

    LatticeSpinor() = default;
    LatticeSpinor(const LatticeTorus& t, int n)
        : torus(t), rep_dim(n), amp(VecC::Zero(t.site_count() * n)) {}

    VecC site(int index) const { return amp.segment(index * rep_dim, rep_dim); }
    void set_site(int index, const VecC& v) { amp.segment(index * rep_dim, rep_dim) = v; }

    /// Trilinear interpolation of all color components at a point.
    VecC sample(const Vec3& p) const;

    Complex inner(const LatticeSpinor& other) const {
        return torus.cell_volume() * amp.dot(other.amp);
    }
    double norm() const { return std::sqrt(torus.cell_volume()) * amp.norm(); }
};

/// (e^{-tX})*ω: pullback of the one-form part along the inverse flow, leaving
/// Lie-algebra values untouched. Chain rule with the variational-equation
/// differential of the inverse flow.
GaugeOneForm pullback_oneform(const LatticeTorus& torus, const VectorField& X,
                              double t, const GaugeOneForm& omega, int steps);

/// Flat binary serialization, site-major per axis, with a one-line JSON
/// header (rep dim, N, L, axis order). Round-trips bit-exactly.
void save_gauge_form(const GaugeOneForm& form, const std::string& path);
GaugeOneForm load_gauge_form(const std::string& path);

} // namespace qhl

#endif
