#ifndef QHL_LATTICE_HPP
#define QHL_LATTICE_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace qhl {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Flat 3-torus discretized with N sites per axis, box length L, spacing h = L/N.
/// Sites are enumerated x-fastest: index = ix + N*(iy + N*iz).
struct LatticeTorus {
    int sites_per_axis = 0;
    double box_length = 0.0;

    double spacing() const { return box_length / sites_per_axis; }
    int site_count() const {
        return sites_per_axis * sites_per_axis * sites_per_axis;
    }
    double cell_volume() const {
        double h = spacing();
        return h * h * h;
    }

    int site_index(int ix, int iy, int iz) const {
        int n = sites_per_axis;
        return ix + n * (iy + n * iz);
    }
    Eigen::Vector3i site_coords(int index) const {
        int n = sites_per_axis;
        return {index % n, (index / n) % n, index / (n * n)};
    }
    Vec3 site_position(int index) const {
        return site_coords(index).cast<double>() * spacing();
    }

    /// Wrap a point into [0, L)^3.
    Vec3 wrap(const Vec3& p) const;

    /// Shortest periodic displacement a - b.
    Vec3 periodic_delta(const Vec3& a, const Vec3& b) const;

    bool operator==(const LatticeTorus& other) const = default;
};

/// pre: N >= 2, L > 0
LatticeTorus build_torus(int sites_per_axis, double box_length);

/// Corner indices and convex weights for trilinear interpolation at p
/// (p wrapped periodically first).
struct TrilinearStencil {
    int corner[8];
    double weight[8];
};
TrilinearStencil trilinear_stencil(const LatticeTorus& torus, const Vec3& p);

/// Vector field sampled on lattice sites, interpolated trilinearly between
/// them. Constant fields are tagged: their flows are exact translations and
/// in particular isometries.
class VectorField {
  public:
    VectorField(const LatticeTorus& torus, std::vector<Vec3> site_values,
                bool constant_field = false);

    static VectorField constant(const LatticeTorus& torus, const Vec3& value);
    static VectorField sample(const LatticeTorus& torus,
                              const std::function<Vec3(const Vec3&)>& fn);

    const LatticeTorus& torus() const { return torus_; }
    bool is_constant() const { return constant_; }
    const Vec3& site_value(int index) const { return values_[index]; }

    /// Trilinear interpolation at an arbitrary point (wrapped periodically).
    Vec3 at(const Vec3& p) const;

    /// Derivative matrix dX_a/dx_b at p: centered differences at sites,
    /// interpolated trilinearly. Exactly zero for constant fields.
    Mat3 derivative_at(const Vec3& p) const;

    VectorField negated() const;

  private:
    LatticeTorus torus_;
    std::vector<Vec3> values_;
    bool constant_;
};

/// Integral curve samples of dγ/dt = X(γ) from a base point.
/// Points are stored unwrapped (continuous lift); `end` is the wrapped endpoint.
struct FlowPath {
    Vec3 base = Vec3::Zero();
    std::vector<double> times;
    std::vector<Vec3> points;
    Vec3 end = Vec3::Zero();

    int segment_count() const { return static_cast<int>(points.size()) - 1; }

    /// Samples in reverse order (the path run backwards); exact reversal,
    /// no re-integration.
    FlowPath reversed() const;
};

/// Classical fourth-order fixed-step integration of the flow of X.
/// pre: steps >= 1 (ignored when t == 0, which yields a single sample)
FlowPath integrate_flow(const LatticeTorus& torus, const VectorField& X,
                        const Vec3& start, double t, int steps);

struct FlowMap {
    Vec3 end = Vec3::Zero();         // wrapped endpoint
    Vec3 end_unwrapped = Vec3::Zero();
    Mat3 jacobian = Mat3::Identity(); // d(end)/d(start), via variational equation
    FlowPath path;
};

/// Flow together with the linearization J(t) solving dJ/dt = DX(γ(t)) J.
FlowMap flow_with_jacobian(const LatticeTorus& torus, const VectorField& X,
                           const Vec3& start, double t, int steps);

/// det of the linearized flow map; 1 for divergence-free (e.g. constant) X.
double flow_jacobian(const LatticeTorus& torus, const VectorField& X,
                     const Vec3& start, double t, int steps);

} // namespace qhl

#endif
