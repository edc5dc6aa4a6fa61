#include "qhl/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace qhl {

Vec3 LatticeTorus::wrap(const Vec3& p) const {
    Vec3 w;
    for (int a = 0; a < 3; ++a) {
        double x = std::fmod(p[a], box_length);
        if (x < 0.0) x += box_length;
        // fmod can return box_length after the negative fixup
        if (x >= box_length) x -= box_length;
        w[a] = x;
    }
    return w;
}

Vec3 LatticeTorus::periodic_delta(const Vec3& a, const Vec3& b) const {
    Vec3 d = a - b;
    for (int i = 0; i < 3; ++i) {
        d[i] -= box_length * std::round(d[i] / box_length);
    }
    return d;
}

LatticeTorus build_torus(int sites_per_axis, double box_length) {
    if (sites_per_axis < 2)
        throw std::invalid_argument("build_torus: need at least 2 sites per axis");
    if (!(box_length > 0.0))
        throw std::invalid_argument("build_torus: box length must be positive");
    return LatticeTorus{sites_per_axis, box_length};
}

VectorField::VectorField(const LatticeTorus& torus, std::vector<Vec3> site_values,
                         bool constant_field)
    : torus_(torus), values_(std::move(site_values)), constant_(constant_field) {
    if (static_cast<int>(values_.size()) != torus_.site_count())
        throw std::invalid_argument("VectorField: value count does not match lattice");
}

VectorField VectorField::constant(const LatticeTorus& torus, const Vec3& value) {
    return VectorField(torus, std::vector<Vec3>(torus.site_count(), value), true);
}

VectorField VectorField::sample(const LatticeTorus& torus,
                                const std::function<Vec3(const Vec3&)>& fn) {
    std::vector<Vec3> vals(torus.site_count());
    for (int i = 0; i < torus.site_count(); ++i) vals[i] = fn(torus.site_position(i));
    return VectorField(torus, std::move(vals), false);
}

TrilinearStencil trilinear_stencil(const LatticeTorus& torus, const Vec3& p) {
    const int n = torus.sites_per_axis;
    const double h = torus.spacing();
    Vec3 q = torus.wrap(p) / h;
    int base[3];
    double f[3];
    for (int a = 0; a < 3; ++a) {
        double fl = std::floor(q[a]);
        base[a] = static_cast<int>(fl) % n;
        if (base[a] < 0) base[a] += n;
        f[a] = q[a] - fl;
    }
    TrilinearStencil st;
    for (int c = 0; c < 8; ++c) {
        int dx = c & 1, dy = (c >> 1) & 1, dz = (c >> 2) & 1;
        int ix = (base[0] + dx) % n;
        int iy = (base[1] + dy) % n;
        int iz = (base[2] + dz) % n;
        st.corner[c] = torus.site_index(ix, iy, iz);
        st.weight[c] = (dx ? f[0] : 1.0 - f[0]) * (dy ? f[1] : 1.0 - f[1]) *
                       (dz ? f[2] : 1.0 - f[2]);
    }
    return st;
}

Vec3 VectorField::at(const Vec3& p) const {
    if (constant_) return values_[0];
    TrilinearStencil st = trilinear_stencil(torus_, p);
    Vec3 v = Vec3::Zero();
    for (int c = 0; c < 8; ++c) v += st.weight[c] * values_[st.corner[c]];
    return v;
}

Mat3 VectorField::derivative_at(const Vec3& p) const {
    if (constant_) return Mat3::Zero();
    const int n = torus_.sites_per_axis;
    const double h = torus_.spacing();
    TrilinearStencil st = trilinear_stencil(torus_, p);
    Mat3 d = Mat3::Zero();
    for (int c = 0; c < 8; ++c) {
        Eigen::Vector3i ic = torus_.site_coords(st.corner[c]);
        for (int b = 0; b < 3; ++b) {
            Eigen::Vector3i up = ic, dn = ic;
            up[b] = (up[b] + 1) % n;
            dn[b] = (dn[b] + n - 1) % n;
            Vec3 diff = (values_[torus_.site_index(up[0], up[1], up[2])] -
                         values_[torus_.site_index(dn[0], dn[1], dn[2])]) /
                        (2.0 * h);
            d.col(b) += st.weight[c] * diff;
        }
    }
    return d;
}

VectorField VectorField::negated() const {
    std::vector<Vec3> vals(values_.size());
    for (size_t i = 0; i < values_.size(); ++i) vals[i] = -values_[i];
    return VectorField(torus_, std::move(vals), constant_);
}

FlowPath FlowPath::reversed() const {
    FlowPath r;
    r.times.reserve(times.size());
    r.points.assign(points.rbegin(), points.rend());
    const double total = times.empty() ? 0.0 : times.back();
    for (auto it = times.rbegin(); it != times.rend(); ++it)
        r.times.push_back(total - *it);
    r.base = r.points.empty() ? Vec3::Zero() : r.points.front();
    r.end = points.empty() ? Vec3::Zero() : base;
    return r;
}

FlowMap flow_with_jacobian(const LatticeTorus& torus, const VectorField& X,
                           const Vec3& start, double t, int steps) {
    if (steps < 1) throw std::invalid_argument("flow: steps must be >= 1");
    FlowMap fm;
    fm.path.base = start;
    fm.path.times.push_back(0.0);
    fm.path.points.push_back(start);
    Vec3 y = start;
    Mat3 J = Mat3::Identity();
    if (t != 0.0) {
        const double dt = t / steps;
        for (int k = 0; k < steps; ++k) {
            // RK4 on the combined system (γ, J).
            Vec3 k1 = X.at(y);
            Mat3 m1 = X.derivative_at(y) * J;
            Vec3 k2 = X.at(y + 0.5 * dt * k1);
            Mat3 m2 = X.derivative_at(y + 0.5 * dt * k1) * (J + 0.5 * dt * m1);
            Vec3 k3 = X.at(y + 0.5 * dt * k2);
            Mat3 m3 = X.derivative_at(y + 0.5 * dt * k2) * (J + 0.5 * dt * m2);
            Vec3 k4 = X.at(y + dt * k3);
            Mat3 m4 = X.derivative_at(y + dt * k3) * (J + dt * m3);
            y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            J += (dt / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
            fm.path.times.push_back((k + 1) * dt);
            fm.path.points.push_back(y);
        }
    }
    fm.end_unwrapped = y;
    fm.end = torus.wrap(y);
    fm.path.end = fm.end;
    fm.jacobian = J;
    return fm;
}

FlowPath integrate_flow(const LatticeTorus& torus, const VectorField& X,
                        const Vec3& start, double t, int steps) {
    return flow_with_jacobian(torus, X, start, t, steps).path;
}

double flow_jacobian(const LatticeTorus& torus, const VectorField& X,
                     const Vec3& start, double t, int steps) {
    return flow_with_jacobian(torus, X, start, t, steps).jacobian.determinant();
}

} // namespace qhl
