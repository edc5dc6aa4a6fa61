#include "qhl/holonomy.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace qhl {

namespace {

// exp of an anti-Hermitian matrix; closed form for the 2x2 traceless case,
// Padé otherwise.
MatC exp_anti_hermitian(const MatC& a) {
    if (a.rows() == 2) {
        const Complex tr = a.trace();
        if (std::abs(tr) < 1e-14) {
            // a = i v·σ ⇒ exp(a) = cos|v| + sin|v|/|v| · a
            Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
            double v2 = det.real(); // det(i v·σ) = |v|²
            if (v2 < 0.0) v2 = 0.0;
            double v = std::sqrt(v2);
            double c = std::cos(v);
            double s = v > 1e-30 ? std::sin(v) / v : 1.0;
            MatC r = s * a;
            r(0, 0) += c;
            r(1, 1) += c;
            return r;
        }
    }
    return a.exp();
}

} // namespace

MatC holonomy(const FlowPath& path, const Connection& conn) {
    const int n = conn.rep_dim();
    MatC u = MatC::Identity(n, n);
    const int segments = path.segment_count();
    for (int k = 0; k < segments; ++k) {
        const Vec3 dx = path.points[k + 1] - path.points[k];
        if (dx.squaredNorm() == 0.0) continue;
        const Vec3 mid = 0.5 * (path.points[k] + path.points[k + 1]);
        u = exp_anti_hermitian(-conn.contract(mid, dx)) * u;
    }
    return u;
}

TransportGeometry transport_geometry(const LatticeTorus& torus, const VectorField& X,
                                     double t, int flow_steps) {
    TransportGeometry g;
    g.torus = torus;
    g.t = t;
    const int sites = torus.site_count();
    g.source.resize(sites);
    g.inv_jac.resize(sites);
    g.path.resize(sites);
    g.pullback_jac.resize(sites);
    const VectorField back = X.negated();
    for (int site = 0; site < sites; ++site) {
        const Vec3 target = torus.site_position(site);
        FlowMap fm = flow_with_jacobian(torus, back, target, t, flow_steps);
        g.source[site] = fm.end;
        g.inv_jac[site] = fm.jacobian.determinant();
        g.pullback_jac[site] = fm.jacobian;
        g.path[site] = fm.path.reversed(); // forward path m -> m'
    }
    return g;
}

LatticeSpinor apply_holonomy_diffeo_geom(const SiteFunction& f,
                                         const TransportGeometry& geom,
                                         const Connection& conn,
                                         const LatticeSpinor& psi,
                                         bool unitarize) {
    if (!(psi.torus == geom.torus))
        throw std::invalid_argument("apply_holonomy_diffeo: lattice mismatch");
    LatticeSpinor out(psi.torus, psi.rep_dim);
    const int sites = psi.torus.site_count();
    for (int site = 0; site < sites; ++site) {
        VecC v = psi.sample(geom.source[site]);
        v = holonomy(geom.path[site], conn) * v;
        if (f) v *= f(geom.source[site]);
        if (unitarize) {
            double jac = geom.inv_jac[site];
            v *= std::sqrt(std::abs(jac));
        }
        out.set_site(site, v);
    }
    return out;
}

LatticeSpinor apply_holonomy_diffeo(const SiteFunction& f, const VectorField& X,
                                    double t, const Connection& conn,
                                    const LatticeSpinor& psi,
                                    const HolonomyDiffeoOptions& opt) {
    TransportGeometry geom = transport_geometry(psi.torus, X, t, opt.flow_steps);
    return apply_holonomy_diffeo_geom(f, geom, conn, psi, opt.unitarize);
}

OneForm adjoint_flow_on_oneform_geom(const TransportGeometry& geom,
                                     const Connection& conn, const OneForm& omega) {
    OneForm out(geom.torus, omega.rep_dim());
    const int sites = geom.torus.site_count();
    for (int site = 0; site < sites; ++site) {
        MatC pulled[3];
        for (int b = 0; b < 3; ++b) pulled[b] = omega.sample(b, geom.source[site]);
        const MatC u = holonomy(geom.path[site], conn);
        const MatC uinv = u.adjoint(); // unitary transport
        for (int a = 0; a < 3; ++a) {
            MatC v = MatC::Zero(omega.rep_dim(), omega.rep_dim());
            for (int b = 0; b < 3; ++b) v += geom.pullback_jac[site](b, a) * pulled[b];
            out.at(a, site) = u * v * uinv;
        }
    }
    return out;
}

OneForm adjoint_flow_on_oneform(const VectorField& X, double t,
                                const Connection& conn, const OneForm& omega,
                                int flow_steps) {
    TransportGeometry geom = transport_geometry(omega.torus(), X, t, flow_steps);
    return adjoint_flow_on_oneform_geom(geom, conn, omega);
}

NodeTransportEngine::NodeTransportEngine(const TransportGeometry& geom,
                                         const std::vector<OneForm>& directions,
                                         const OneForm* offset)
    : geom_(&geom), directions_(static_cast<int>(directions.size())),
      has_offset_(offset != nullptr) {
    if (directions.empty() && !offset)
        throw std::invalid_argument("NodeTransportEngine: nothing to transport with");
    rep_dim_ = directions.empty() ? offset->rep_dim() : directions.front().rep_dim();
    const int sites = geom.torus.site_count();
    const int per_seg = directions_ + (has_offset_ ? 1 : 0);

    seg_offset_.resize(sites + 1, 0);
    source_.resize(sites);
    long total_segments = 0;
    for (int s = 0; s < sites; ++s) {
        seg_offset_[s] = static_cast<int>(total_segments);
        total_segments += geom.path[s].segment_count();
        TrilinearStencil st = trilinear_stencil(geom.torus, geom.source[s]);
        for (int c = 0; c < 8; ++c) {
            source_[s].corner[c] = st.corner[c];
            source_[s].weight[c] = st.weight[c];
        }
    }
    seg_offset_[sites] = static_cast<int>(total_segments);

    generators_.resize(total_segments * per_seg);
    for (int s = 0; s < sites; ++s) {
        const FlowPath& path = geom.path[s];
        for (int k = 0; k < path.segment_count(); ++k) {
            const Vec3 dx = path.points[k + 1] - path.points[k];
            const Vec3 mid = 0.5 * (path.points[k] + path.points[k + 1]);
            const long slot = (seg_offset_[s] + k) * static_cast<long>(per_seg);
            for (int i = 0; i < directions_; ++i)
                generators_[slot + i] = -directions[i].contract(mid, dx);
            if (has_offset_) generators_[slot + directions_] = -offset->contract(mid, dx);
        }
    }
}

MatC NodeTransportEngine::site_transport(const Eigen::Ref<const VecC>& coords,
                                         int site) const {
    if (coords.size() != directions_)
        throw std::invalid_argument("NodeTransportEngine: coordinate count mismatch");
    const int per_seg = directions_ + (has_offset_ ? 1 : 0);
    MatC u = MatC::Identity(rep_dim_, rep_dim_);
    MatC arg(rep_dim_, rep_dim_);
    MatC tmp(rep_dim_, rep_dim_);
    for (int k = seg_offset_[site]; k < seg_offset_[site + 1]; ++k) {
        const long slot = static_cast<long>(k) * per_seg;
        arg.setZero();
        for (int i = 0; i < directions_; ++i) {
            const Complex c = coords[i];
            if (c != Complex(0.0)) arg.noalias() += c * generators_[slot + i];
        }
        if (has_offset_) arg += generators_[slot + directions_];
        tmp.noalias() = exp_anti_hermitian(arg) * u;
        u.swap(tmp);
    }
    return u;
}

void NodeTransportEngine::apply(const Eigen::Ref<const VecC>& coords,
                                const SiteFunction& f, bool unitarize,
                                const VecC& psi_amp, VecC& out_amp) const {
    const int sites = geom_->torus.site_count();
    const int n = rep_dim_;
    if (psi_amp.size() != static_cast<long>(sites) * n)
        throw std::invalid_argument("NodeTransportEngine: amplitude size mismatch");
    out_amp.resize(psi_amp.size());
    VecC v(n);
    for (int s = 0; s < sites; ++s) {
        v.setZero();
        for (int c = 0; c < 8; ++c)
            v += source_[s].weight[c] *
                 psi_amp.segment(static_cast<long>(source_[s].corner[c]) * n, n);
        VecC moved = site_transport(coords, s) * v;
        if (f) moved *= f(geom_->source[s]);
        if (unitarize) moved *= std::sqrt(std::abs(geom_->inv_jac[s]));
        out_amp.segment(static_cast<long>(s) * n, n) = moved;
    }
}

} // namespace qhl
