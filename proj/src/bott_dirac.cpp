#include "qhl/bott_dirac.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qhl {

namespace {

long boson_dim(int modes, int levels) {
    long d = 1;
    for (int i = 0; i < modes; ++i) d *= levels;
    return d;
}

struct FermionAction {
    FockMask target;
    double sign;
    bool nonzero;
};

// c_i (kind 0) or c̄_i (kind 1) on a basis mask: ext ± int with the
// ascending-index sign string.
FermionAction clifford_on_mask(int i, FockMask m, int kind) {
    const FockMask bit = FockMask{1} << i;
    double sign = (popcount_below(m, i) & 1) ? -1.0 : 1.0;
    if (m & bit) {
        // int part; c̄ contributes -int
        return {static_cast<FockMask>(m & ~bit), kind == 1 ? -sign : sign, true};
    }
    return {static_cast<FockMask>(m | bit), sign, true};
}

} // namespace

TruncatedOperator assemble_bott_dirac(int modes, int levels, const ModeParams& params,
                                      long max_dimension) {
    params.validate();
    if (modes < 1) throw std::invalid_argument("assemble_bott_dirac: need n >= 1");
    if (params.mode_count() < modes)
        throw std::invalid_argument("assemble_bott_dirac: not enough s parameters");
    const long bdim = boson_dim(modes, levels);
    const long dim = bdim << modes;
    if (dim > max_dimension)
        throw std::invalid_argument("assemble_bott_dirac: dimension " +
                                    std::to_string(dim) + " exceeds the configured bound " +
                                    std::to_string(max_dimension));

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(dim) * 4 * modes);
    const long fdim = 1L << modes;

    std::vector<ModeMatrices> mm(modes);
    for (int i = 0; i < modes; ++i) mm[i] = mode_matrices(levels, params.s[i], params.tau2);

    std::vector<long> stride(modes, 1);
    for (int i = 1; i < modes; ++i) stride[i] = stride[i - 1] * levels;

    for (long b = 0; b < bdim; ++b) {
        for (long mi = 0; mi < fdim; ++mi) {
            const FockMask mask = static_cast<FockMask>(mi);
            const long col = mi + fdim * b;
            for (int i = 0; i < modes; ++i) {
                const int k = static_cast<int>((b / stride[i]) % levels);
                // τ₂ c̄_i ⊗ D̂_i
                FermionAction fa = clifford_on_mask(i, mask, 1);
                for (int dk : {-1, +1}) {
                    int k2 = k + dk;
                    if (k2 < 0 || k2 >= levels) continue;
                    double dval = mm[i].derivative(k2, k);
                    long b2 = b + static_cast<long>(dk) * stride[i];
                    trips.emplace_back(fa.target + fdim * b2, col,
                                       params.tau2 * fa.sign * dval);
                }
                // s_i c_i ⊗ X̂_i
                FermionAction fc = clifford_on_mask(i, mask, 0);
                for (int dk : {-1, +1}) {
                    int k2 = k + dk;
                    if (k2 < 0 || k2 >= levels) continue;
                    double xval = mm[i].position(k2, k);
                    long b2 = b + static_cast<long>(dk) * stride[i];
                    trips.emplace_back(fc.target + fdim * b2, col,
                                       params.s[i] * fc.sign * xval);
                }
            }
        }
    }

    TruncatedOperator op;
    op.mat.resize(dim, dim);
    op.mat.setFromTriplets(trips.begin(), trips.end());
    op.basis = BasisDescriptor{modes, levels, modes, 0};
    op.self_adjoint = true;
    return op;
}

TruncatedOperator bott_dirac_square_closed_form(int modes, int levels,
                                                const ModeParams& params) {
    params.validate();
    const long bdim = boson_dim(modes, levels);
    const long fdim = 1L << modes;
    const long dim = bdim * fdim;

    std::vector<ModeMatrices> mm(modes);
    std::vector<MatR> osc(modes);
    for (int i = 0; i < modes; ++i) {
        mm[i] = mode_matrices(levels, params.s[i], params.tau2);
        osc[i] = -params.tau2 * params.tau2 * (mm[i].derivative * mm[i].derivative) +
                 params.s[i] * params.s[i] * (mm[i].position * mm[i].position);
    }
    std::vector<long> stride(modes, 1);
    for (int i = 1; i < modes; ++i) stride[i] = stride[i - 1] * levels;

    std::vector<Eigen::Triplet<double>> trips;
    for (long b = 0; b < bdim; ++b)
        for (long mi = 0; mi < fdim; ++mi) {
            const long col = mi + fdim * b;
            for (int i = 0; i < modes; ++i) {
                const int k = static_cast<int>((b / stride[i]) % levels);
                const double occ = (mi >> i) & 1 ? 1.0 : -1.0; // 2N_i - 1
                trips.emplace_back(col, col, params.tau2 * params.s[i] * occ);
                for (int dk : {-2, 0, 2}) {
                    int k2 = k + dk;
                    if (k2 < 0 || k2 >= levels) continue;
                    double v = osc[i](k2, k);
                    if (v == 0.0) continue;
                    trips.emplace_back(mi + fdim * (b + static_cast<long>(dk) * stride[i]),
                                       col, v);
                }
            }
        }

    TruncatedOperator op;
    op.mat.resize(dim, dim);
    op.mat.setFromTriplets(trips.begin(), trips.end());
    op.basis = BasisDescriptor{modes, levels, modes, 0};
    op.self_adjoint = true;
    return op;
}

std::vector<long> interior_state_indices(int modes, int levels, int margin) {
    const long bdim = boson_dim(modes, levels);
    const long fdim = 1L << modes;
    std::vector<long> states;
    std::vector<long> stride(modes, 1);
    for (int i = 1; i < modes; ++i) stride[i] = stride[i - 1] * levels;
    for (long b = 0; b < bdim; ++b) {
        bool ok = true;
        for (int i = 0; i < modes && ok; ++i)
            if ((b / stride[i]) % levels > levels - 1 - margin) ok = false;
        if (!ok) continue;
        for (long mi = 0; mi < fdim; ++mi) states.push_back(mi + fdim * b);
    }
    return states;
}

Eigen::MatrixXd restrict_to_states(const Eigen::MatrixXd& m,
                                   const std::vector<long>& states) {
    const int k = static_cast<int>(states.size());
    Eigen::MatrixXd out(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) out(r, c) = m(states[r], states[c]);
    return out;
}

Eigen::MatrixXd interior_square(const TruncatedOperator& bott, int modes, int levels,
                                int margin) {
    Eigen::MatrixXd sq = (bott.mat * bott.mat).toDense();
    return restrict_to_states(sq, interior_state_indices(modes, levels, margin));
}

namespace {

std::vector<double> lanczos_lowest(const Eigen::SparseMatrix<double>& a, int count,
                                   double tol) {
    const long n = a.rows();
    const int max_iter = static_cast<int>(std::min<long>(n, 8L * count + 400));
    std::vector<Eigen::VectorXd> basis;
    basis.reserve(max_iter);
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i) v[i] = 1.0 / (1.0 + static_cast<double>(i));
    v.normalize();
    basis.push_back(v);

    std::vector<double> alpha, beta;
    std::vector<double> previous;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = a * basis.back();
        double al = basis.back().dot(w);
        alpha.push_back(al);
        w -= al * basis.back();
        if (basis.size() > 1) w -= beta.back() * basis[basis.size() - 2];
        // full reorthogonalization keeps the recursion deterministic and clean
        for (const auto& q : basis) w -= q.dot(w) * q;
        double be = w.norm();

        const int m = static_cast<int>(alpha.size());
        if (m >= count) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < m) {
                    t(i, i + 1) = beta[i];
                    t(i + 1, i) = beta[i];
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
            std::vector<double> ritz(es.eigenvalues().data(),
                                     es.eigenvalues().data() + count);
            if (!previous.empty()) {
                double drift = 0.0;
                for (int i = 0; i < count; ++i)
                    drift = std::max(drift, std::abs(ritz[i] - previous[i]));
                if (drift < tol || be < tol) return ritz;
            }
            previous = ritz;
            if (static_cast<long>(m) == n) return ritz;
        }
        if (be < 1e-14) {
            // invariant subspace exhausted; restart deterministically orthogonal
            Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
            r[(basis.size() * 7919) % n] = 1.0;
            for (const auto& q : basis) r -= q.dot(r) * q;
            double rn = r.norm();
            if (rn < 1e-12) break;
            beta.push_back(0.0);
            basis.push_back(r / rn);
        } else {
            beta.push_back(be);
            basis.push_back(w / be);
        }
    }
    if (previous.empty()) throw std::runtime_error("spectrum: Lanczos did not converge");
    return previous;
}

} // namespace

std::vector<double> spectrum(const TruncatedOperator& op, int count) {
    if (!op.self_adjoint)
        throw std::invalid_argument("spectrum: operator is not flagged self-adjoint");
    if (count < 1 || count > op.dim())
        throw std::invalid_argument("spectrum: eigenvalue count out of range");
    if (op.dim() <= 4096) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense(),
                                                          Eigen::EigenvaluesOnly);
        return std::vector<double>(es.eigenvalues().data(),
                                   es.eigenvalues().data() + count);
    }
    return lanczos_lowest(op.mat, count, 1e-10);
}

SquareResidualReport verify_square_closed_form(int modes, int levels,
                                               const ModeParams& params) {
    TruncatedOperator b = assemble_bott_dirac(modes, levels, params);
    TruncatedOperator closed = bott_dirac_square_closed_form(modes, levels, params);
    Eigen::MatrixXd residual = (b.mat * b.mat).toDense() - closed.dense();

    std::vector<char> below_top_two(residual.rows(), 0);
    for (long s : interior_state_indices(modes, levels, 2)) below_top_two[s] = 1;
    std::vector<char> below_top_one(residual.rows(), 0);
    for (long s : interior_state_indices(modes, levels, 1)) below_top_one[s] = 1;

    SquareResidualReport rep;
    for (long r = 0; r < residual.rows(); ++r)
        for (long c = 0; c < residual.cols(); ++c) {
            double v = std::abs(residual(r, c));
            if (v == 0.0) continue;
            if (below_top_two[r] && below_top_two[c])
                rep.interior_max = std::max(rep.interior_max, v);
            else
                rep.edge_max = std::max(rep.edge_max, v);
            if (below_top_one[r] && below_top_one[c])
                rep.below_top_level_max = std::max(rep.below_top_level_max, v);
        }
    return rep;
}

CommutatorProfile commutator_growth_profile(const SobolevBasis& basis,
                                            const FlowPath& path, double tau2,
                                            int n_max, double fd_epsilon) {
    if (n_max < 1 || n_max > basis.size())
        throw std::invalid_argument("commutator_growth_profile: n_max out of range");
    CommutatorProfile prof;
    double running = 0.0;
    for (int i = 0; i < n_max; ++i) {
        OneForm direction = basis.xi(i);
        OneForm plus = direction;
        plus *= fd_epsilon;
        OneForm minus = direction;
        minus *= -fd_epsilon;
        MatC dh = (holonomy(path, plus) - holonomy(path, minus)) / (2.0 * fd_epsilon);
        double opnorm = dh.jacobiSvd().singularValues()(0);
        double inc = tau2 * tau2 * opnorm * opnorm;
        double w = basis.weight(i);
        prof.lambda.push_back(basis.lambda(i));
        prof.weight_sq.push_back(1.0 / (w * w));
        prof.increment.push_back(inc);
        running += inc;
        prof.gamma.push_back(running);
    }
    return prof;
}

} // namespace qhl
