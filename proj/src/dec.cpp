#include "qhl/dec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qhl {

namespace {

inline int shifted_site(const LatticeTorus& torus, int site, int axis, int by) {
    Eigen::Vector3i c = torus.site_coords(site);
    int n = torus.sites_per_axis;
    c[axis] = (c[axis] + by % n + n) % n;
    return torus.site_index(c[0], c[1], c[2]);
}

// plane index for the ordered pair a < b
inline int plane_index(int a, int b) { return (a == 0) ? (b - 1) : 2; }

} // namespace

VecR dec_d0(const LatticeTorus& torus, const VecR& f) {
    const int sites = torus.site_count();
    if (f.size() != sites) throw std::invalid_argument("dec_d0: not a 0-form");
    const double inv_h = 1.0 / torus.spacing();
    VecR u(3 * sites);
    for (int a = 0; a < 3; ++a)
        for (int s = 0; s < sites; ++s)
            u[a * sites + s] = (f[shifted_site(torus, s, a, +1)] - f[s]) * inv_h;
    return u;
}

VecR dec_delta1(const LatticeTorus& torus, const VecR& u) {
    const int sites = torus.site_count();
    if (u.size() != 3 * sites) throw std::invalid_argument("dec_delta1: not a 1-form");
    const double inv_h = 1.0 / torus.spacing();
    VecR f = VecR::Zero(sites);
    for (int a = 0; a < 3; ++a)
        for (int s = 0; s < sites; ++s)
            f[s] -= (u[a * sites + s] - u[a * sites + shifted_site(torus, s, a, -1)]) * inv_h;
    return f;
}

VecR dec_d1(const LatticeTorus& torus, const VecR& u) {
    const int sites = torus.site_count();
    if (u.size() != 3 * sites) throw std::invalid_argument("dec_d1: not a 1-form");
    const double inv_h = 1.0 / torus.spacing();
    VecR w = VecR::Zero(3 * sites);
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            const int p = plane_index(a, b);
            for (int s = 0; s < sites; ++s) {
                double dab = (u[b * sites + shifted_site(torus, s, a, +1)] - u[b * sites + s]) -
                             (u[a * sites + shifted_site(torus, s, b, +1)] - u[a * sites + s]);
                w[p * sites + s] = dab * inv_h;
            }
        }
    return w;
}

VecR dec_delta2(const LatticeTorus& torus, const VecR& w) {
    const int sites = torus.site_count();
    if (w.size() != 3 * sites) throw std::invalid_argument("dec_delta2: not a 2-form");
    const double inv_h = 1.0 / torus.spacing();
    VecR u = VecR::Zero(3 * sites);
    // (δ2 w)_b = -Σ_{a≠b} backward-diff_a w_ab, with w_ab = -w_ba.
    for (int b = 0; b < 3; ++b)
        for (int a = 0; a < 3; ++a) {
            if (a == b) continue;
            const double sign = (a < b) ? 1.0 : -1.0;
            const int p = (a < b) ? plane_index(a, b) : plane_index(b, a);
            for (int s = 0; s < sites; ++s) {
                double back = w[p * sites + s] - w[p * sites + shifted_site(torus, s, a, -1)];
                u[b * sites + s] -= sign * back * inv_h;
            }
        }
    return u;
}

VecR hodge_laplacian_apply(const LatticeTorus& torus, const VecR& u) {
    return dec_d0(torus, dec_delta1(torus, u)) + dec_delta2(torus, dec_d1(torus, u));
}

GaugeOneForm hodge_laplacian_apply(const GaugeOneForm& omega) {
    const LatticeTorus& torus = omega.torus();
    const int sites = torus.site_count();
    const double inv_h2 = 1.0 / (torus.spacing() * torus.spacing());
    GaugeOneForm out(torus, omega.rep_dim());
    for (int a = 0; a < 3; ++a)
        for (int s = 0; s < sites; ++s) {
            MatC acc = MatC::Zero(omega.rep_dim(), omega.rep_dim());
            for (int b = 0; b < 3; ++b) {
                acc += 2.0 * omega.at(a, s);
                acc -= omega.at(a, shifted_site(torus, s, b, +1));
                acc -= omega.at(a, shifted_site(torus, s, b, -1));
            }
            out.at(a, s) = inv_h2 * acc;
        }
    return out;
}

Eigen::MatrixXd hodge_laplacian_dense(const LatticeTorus& torus) {
    const int dim = 3 * torus.site_count();
    Eigen::MatrixXd m(dim, dim);
    VecR e = VecR::Zero(dim);
    for (int j = 0; j < dim; ++j) {
        e[j] = 1.0;
        m.col(j) = hodge_laplacian_apply(torus, e);
        e[j] = 0.0;
    }
    return m;
}

double laplacian_symbol(const LatticeTorus& torus, const Eigen::Vector3i& k) {
    const double h = torus.spacing();
    const int n = torus.sites_per_axis;
    double terms[3];
    for (int j = 0; j < 3; ++j) {
        int m = ((k[j] % n) + n) % n;
        m = std::min(m, n - m); // ±k and aliasing give the same symbol bits
        double s = std::sin(M_PI * static_cast<double>(m) / n);
        terms[j] = s * s;
    }
    std::sort(terms, terms + 3, std::greater<double>());
    return (terms[0] + terms[1] + terms[2]) * 4.0 / (h * h);
}

} // namespace qhl
