#include "qhl/suites.hpp"

#include "qhl/bott_dirac.hpp"
#include "qhl/fock_rep.hpp"
#include "qhl/quadrature.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

namespace qhl {

double DeterministicRng::uniform() {
    return static_cast<double>(bits() >> 11) * 0x1.0p-53;
}

double DeterministicRng::symmetric() { return 2.0 * uniform() - 1.0; }

std::uint64_t DeterministicRng::bits() {
    // splitmix64; stable across platforms and toolchains
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

CheckRecord lower_bound_check(const std::string& op, const std::string& params,
                              double value, double min_required) {
    CheckRecord c;
    c.operation = op;
    c.parameters = params + " (measured " + format_double(value) +
                   ", must exceed " + format_double(min_required) + ")";
    c.residual = std::max(0.0, min_required - value);
    c.tolerance = 0.0;
    c.pass = value > min_required;
    return c;
}

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

LatticeSpinor random_spinor(const LatticeTorus& torus, int rep, DeterministicRng& rng) {
    LatticeSpinor psi(torus, rep);
    for (long i = 0; i < psi.amp.size(); ++i)
        psi.amp[i] = Complex(rng.symmetric(), rng.symmetric());
    psi.amp /= std::sqrt(torus.cell_volume()) * psi.amp.norm();
    return psi;
}

LatticeSpinor plane_wave_spinor(const LatticeTorus& torus, int rep,
                                const Eigen::Vector3i& k) {
    LatticeSpinor psi(torus, rep);
    const double l = torus.box_length;
    for (int s = 0; s < torus.site_count(); ++s) {
        Vec3 x = torus.site_position(s);
        double phase = 2.0 * M_PI * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) / l;
        VecC v = VecC::Zero(rep);
        v[0] = std::exp(Complex(0.0, phase));
        psi.set_site(s, v);
    }
    psi.amp /= std::sqrt(torus.cell_volume()) * psi.amp.norm();
    return psi;
}

} // namespace

std::vector<double> closed_form_square_spectrum(int modes, int levels,
                                                const std::vector<double>& s,
                                                double tau2, int margin) {
    std::vector<double> values;
    std::vector<int> k(modes, 0);
    const int kmax_level = levels - 1 - margin;
    do {
        double base = 0.0;
        for (int i = 0; i < modes; ++i) base += 2.0 * tau2 * s[i] * k[i];
        for (long f = 0; f < (1L << modes); ++f) {
            double v = base;
            for (int i = 0; i < modes; ++i)
                if ((f >> i) & 1) v += 2.0 * tau2 * s[i];
            values.push_back(v);
        }
    } while (advance_multi_index(k, kmax_level + 1));
    std::sort(values.begin(), values.end());
    return values;
}

SpectrumCaseResult spectrum_case(int modes, int levels, const std::vector<double>& s,
                                 double tau2, int count) {
    ModeParams params;
    params.tau2 = tau2;
    params.s = s;
    params.levels = levels;
    TruncatedOperator b = assemble_bott_dirac(modes, levels, params);
    Eigen::MatrixXd sq = interior_square(b, modes, levels);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sq, Eigen::EigenvaluesOnly);

    SpectrumCaseResult res;
    auto predicted = closed_form_square_spectrum(modes, levels, s, tau2);
    const int m = std::min<int>(count, static_cast<int>(es.eigenvalues().size()));
    res.min_eigenvalue = es.eigenvalues()(0);
    double gap = 2.0 * tau2 * s[0];
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) < 0.5 * gap) ++res.kernel_dimension;
    for (int i = 0; i < m; ++i) {
        res.eigenvalues.push_back(es.eigenvalues()(i));
        res.predictions.push_back(predicted[i]);
        res.multiset_deviation =
            std::max(res.multiset_deviation, std::abs(es.eigenvalues()(i) - predicted[i]));
    }
    return res;
}

double bott_spectrum_symmetry_defect(int modes, int levels,
                                     const std::vector<double>& s, double tau2) {
    ModeParams params;
    params.tau2 = tau2;
    params.s = s;
    params.levels = levels;
    TruncatedOperator b = assemble_bott_dirac(modes, levels, params);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.dense(),
                                                      Eigen::EigenvaluesOnly);
    const long n = es.eigenvalues().size();
    double worst = 0.0;
    for (long i = 0; i < n; ++i)
        worst = std::max(worst,
                         std::abs(es.eigenvalues()(i) + es.eigenvalues()(n - 1 - i)));
    return worst;
}

SuiteReport run_spectrum_suite(const ExperimentConfig& cfg, const std::string& out_dir) {
    SuiteReport rep;
    rep.name = "spectrum";
    const double scale = cfg.tolerance_scale;
    const int n = cfg.bott_modes;
    const int K = cfg.levels;
    const auto s = cfg.s_sequence(n + 1);
    ModeParams params;
    params.tau2 = cfg.tau2;
    params.s = s;
    params.levels = K;

    std::ostringstream ps;
    ps << "n=" << n << " K=" << K << " tau2=" << cfg.tau2 << " preset=" << cfg.s_preset;
    const std::string tag = ps.str();

    TruncatedOperator b = assemble_bott_dirac(n, K, params);
    rep.add(make_check("bott_dirac self-adjoint", tag, b.self_adjointness_defect(),
                       1e-12 * scale));

    // Gaussian vacuum ⊗ Fock vacuum is annihilated exactly.
    Eigen::VectorXd vac = Eigen::VectorXd::Zero(b.dim());
    vac[0] = 1.0;
    rep.add(make_check("bott_dirac annihilates vacuum", tag, (b.mat * vac).norm(),
                       1e-12 * scale));

    // Odd under fermion parity.
    {
        const long fdim = 1L << n;
        Eigen::VectorXd parity(b.dim());
        for (long i = 0; i < b.dim(); ++i)
            parity[i] = (__builtin_popcount(static_cast<FockMask>(i % fdim)) & 1)
                            ? -1.0
                            : 1.0;
        Eigen::SparseMatrix<double> bp = b.mat * parity.asDiagonal();
        Eigen::SparseMatrix<double> pb = parity.asDiagonal() * b.mat;
        double worst = 0.0;
        Eigen::SparseMatrix<double> sum = bp + pb;
        for (int kk = 0; kk < sum.outerSize(); ++kk)
            for (Eigen::SparseMatrix<double>::InnerIterator it(sum, kk); it; ++it)
                worst = std::max(worst, std::abs(it.value()));
        rep.add(make_check("bott_dirac odd under parity", tag, worst, 1e-14 * scale));
    }

    SpectrumCaseResult sc = spectrum_case(n, K, s, cfg.tau2, 8);
    rep.add(make_check("interior spectrum matches closed form", tag,
                       sc.multiset_deviation, 1e-9 * scale));
    rep.add(make_check("interior kernel is one-dimensional", tag,
                       std::abs(sc.kernel_dimension - 1.0), 0.5));
    rep.add(make_check("interior square positive", tag,
                       std::max(0.0, -sc.min_eigenvalue), 1e-10 * scale));

    if (b.dim() <= 1024) {
        rep.add(make_check("spectrum of B symmetric about zero", tag,
                           bott_spectrum_symmetry_defect(n, K, s, cfg.tau2),
                           1e-10 * scale));
    }

    SquareResidualReport sq = verify_square_closed_form(n, K, params);
    rep.add(make_check("square closed form, interior residual", tag, sq.interior_max,
                       1e-12 * scale));
    rep.add(make_check("square residual confined to top level", tag,
                       sq.below_top_level_max, 1e-12 * scale));
    rep.add(lower_bound_check("square residual present at truncation edge", tag,
                              sq.edge_max, 1e-6));

    // Embedding: isometry of the vacuum-appending map and spectral stability.
    {
        DeterministicRng rng(cfg.seed);
        double worst_norm = 0.0, worst_inner = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            BosonicState eta(n, K);
            BosonicState zeta(n, K);
            for (long i = 0; i < eta.dim(); ++i) {
                eta.amp[i] = Complex(rng.symmetric(), rng.symmetric());
                zeta.amp[i] = Complex(rng.symmetric(), rng.symmetric());
            }
            BosonicState eta2 = embed_vacuum(eta);
            BosonicState zeta2 = embed_vacuum(zeta);
            worst_norm = std::max(worst_norm, std::abs(eta2.norm() - eta.norm()));
            worst_inner = std::max(
                worst_inner, std::abs(mode_inner(eta2, zeta2) - mode_inner(eta, zeta)));
        }
        rep.add(make_check("embedding preserves norms", tag, worst_norm, 1e-14 * scale));
        rep.add(make_check("embedding preserves inner products", tag, worst_inner,
                           1e-14 * scale));
    }
    {
        // B_{n+1}² compressed to embedded interior states of level n.
        ModeParams wide = params;
        if (static_cast<int>(wide.s.size()) < n + 1)
            wide.s.push_back(wide.s.back() + 1.0);
        TruncatedOperator b2 = assemble_bott_dirac(n + 1, K, wide, 1L << 26);
        Eigen::SparseMatrix<double> sq2 = b2.mat * b2.mat;
        const auto inner_states = interior_state_indices(n, K, 2);
        const long fdim_small = 1L << n;
        const long fdim_big = 1L << (n + 1);
        std::vector<long> embedded;
        embedded.reserve(inner_states.size());
        for (long st : inner_states) {
            long mask = st % fdim_small;
            long boson = st / fdim_small;
            embedded.push_back(mask + fdim_big * boson);
        }
        Eigen::MatrixXd compressed(embedded.size(), embedded.size());
        for (size_t r = 0; r < embedded.size(); ++r)
            for (size_t c = 0; c < embedded.size(); ++c)
                compressed(r, c) = sq2.coeff(embedded[r], embedded[c]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esa(compressed,
                                                           Eigen::EigenvaluesOnly);
        Eigen::MatrixXd small =
            interior_square(assemble_bott_dirac(n, K, params), n, K);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esb(small,
                                                           Eigen::EigenvaluesOnly);
        double worst = (esa.eigenvalues() - esb.eigenvalues()).cwiseAbs().maxCoeff();
        rep.add(make_check("embedded interior spectrum reproduced", tag, worst,
                           1e-9 * scale));
    }

    // Spectrum CSV, including the rescaled c/√2 convention column.
    {
        CsvWriter csv(join_path(out_dir, "spectrum.csv"),
                      {"index", "eigenvalue", "closed_form_prediction", "residual",
                       "eigenvalue_rescaled_convention"});
        SpectrumCaseResult full =
            spectrum_case(n, K, s, cfg.tau2,
                          std::min<int>(64, static_cast<int>(
                                                closed_form_square_spectrum(n, K, s,
                                                                            cfg.tau2)
                                                    .size())));
        for (size_t i = 0; i < full.eigenvalues.size(); ++i)
            csv.numeric_row({static_cast<double>(i), full.eigenvalues[i],
                             full.predictions[i],
                             std::abs(full.eigenvalues[i] - full.predictions[i]),
                             0.5 * full.eigenvalues[i]});
        rep.artifacts.push_back("spectrum.csv");
    }
    return rep;
}

SuiteReport run_holonomy_suite(const ExperimentConfig& cfg, const std::string& out_dir) {
    SuiteReport rep;
    rep.name = "holonomy";
    const double scale = cfg.tolerance_scale;
    const int rep_dim = cfg.rep_dim;
    LatticeTorus torus = build_torus(cfg.lattice_sites, cfg.box_length);
    const double l = torus.box_length;
    DeterministicRng rng(cfg.seed + 1);
    const auto gens = su_basis(rep_dim);

    // Flat connection: transport is the identity.
    {
        VectorField x = VectorField::constant(torus, Vec3(l, 0, 0));
        FlowPath loop = integrate_flow(torus, x, Vec3::Zero(), 1.0, 1000);
        Connection flat(torus, rep_dim);
        MatC u = holonomy(loop, flat);
        rep.add(make_check("flat connection gives identity transport", "N=" +
                           std::to_string(torus.sites_per_axis),
                           (u - MatC::Identity(rep_dim, rep_dim)).cwiseAbs().maxCoeff(),
                           1e-14 * scale));
    }

    // Abelian constant connection around a straight loop: exp(-iθLσ₃).
    {
        const double theta = 0.37;
        Connection conn(torus, rep_dim);
        MatC a = MatC::Zero(rep_dim, rep_dim);
        a(0, 0) = Complex(0.0, theta);
        a(1, 1) = Complex(0.0, -theta);
        for (int s = 0; s < torus.site_count(); ++s) conn.at(0, s) = a;
        VectorField x = VectorField::constant(torus, Vec3(l, 0, 0));
        FlowPath loop = integrate_flow(torus, x, Vec3::Zero(), 1.0, 1000);
        MatC u = holonomy(loop, conn);
        MatC expected = MatC::Zero(rep_dim, rep_dim);
        expected(0, 0) = std::exp(Complex(0.0, -theta * l));
        expected(1, 1) = std::exp(Complex(0.0, theta * l));
        rep.add(make_check("abelian loop holonomy matches closed form",
                           "theta=0.37 steps=1000",
                           (u - expected).cwiseAbs().maxCoeff(), 1e-8 * scale));
    }

    // Smooth connection from basis modes; curved path.
    SobolevParams sob{1.0, 1.0};
    SobolevBasis basis = build_sobolev_basis(torus, sob, 30, rep_dim);
    VecR coords = VecR::Zero(30);
    for (int i = 0; i < 30; ++i) coords[i] = 0.4 * rng.symmetric();
    Connection smooth = basis.coords_to_connection(coords);
    VectorField bent = VectorField::sample(torus, [l](const Vec3& p) {
        return Vec3(0.7 + 0.2 * std::sin(2.0 * M_PI * p[1] / l),
                    0.3 * std::cos(2.0 * M_PI * p[0] / l), 0.25);
    });
    FlowPath curve = integrate_flow(torus, bent, Vec3(0.2 * l, 0.55 * l, 0.1 * l), 0.6, 240);

    {
        MatC fwd = holonomy(curve, smooth);
        MatC bwd = holonomy(curve.reversed(), smooth);
        rep.add(make_check("path reversal inverts transport", "240-step curved path",
                           (bwd * fwd - MatC::Identity(rep_dim, rep_dim))
                               .cwiseAbs()
                               .maxCoeff(),
                           1e-10 * scale));
        rep.add(make_check("transport unitary", "smooth connection",
                           (fwd.adjoint() * fwd - MatC::Identity(rep_dim, rep_dim))
                               .cwiseAbs()
                               .maxCoeff(),
                           1e-10 * scale));
    }
    {
        // Concatenation: ordered product of segment holonomies.
        FlowPath first, second;
        const int split = curve.segment_count() / 2;
        first.base = curve.base;
        first.times.assign(curve.times.begin(), curve.times.begin() + split + 1);
        first.points.assign(curve.points.begin(), curve.points.begin() + split + 1);
        second.base = curve.points[split];
        second.times.assign(curve.times.begin() + split, curve.times.end());
        second.points.assign(curve.points.begin() + split, curve.points.end());
        MatC whole = holonomy(curve, smooth);
        MatC composed = holonomy(second, smooth) * holonomy(first, smooth);
        rep.add(make_check("holonomy composes over concatenated paths",
                           "split at shared sample",
                           (whole - composed).cwiseAbs().maxCoeff(), 1e-12 * scale));
    }

    // Isometric-flow unitarity of the represented element on a 16³ lattice.
    {
        LatticeTorus big = build_torus(16, l);
        SobolevBasis big_basis = build_sobolev_basis(big, sob, 12, rep_dim);
        VectorField x = VectorField::constant(big, Vec3(1.0, 0.0, 0.0));
        const double t = 0.25 * l; // 4h: lattice-commensurate
        double worst = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            VecR c = VecR::Zero(12);
            for (int i = 0; i < 12; ++i) c[i] = 0.5 * rng.symmetric();
            Connection conn = big_basis.coords_to_connection(c);
            LatticeSpinor psi = random_spinor(big, rep_dim, rng);
            LatticeSpinor out = apply_holonomy_diffeo({}, x, t, conn, psi, {16, true});
            worst = std::max(worst, std::abs(out.norm() - psi.norm()));
        }
        rep.add(make_check("represented isometric flow preserves norm",
                           "N=16 constant X, 3 connections", worst, 1e-6 * scale));
    }

    // t = 0 reduces to pointwise multiplication by f.
    {
        LatticeSpinor psi = random_spinor(torus, rep_dim, rng);
        SiteFunction f = [l](const Vec3& p) {
            return Complex(1.0 + 0.5 * std::cos(2.0 * M_PI * p[2] / l), 0.0);
        };
        VectorField x = VectorField::constant(torus, Vec3(0.3, 0.1, 0.0));
        LatticeSpinor out = apply_holonomy_diffeo(f, x, 0.0, smooth, psi, {8, true});
        LatticeSpinor expect = psi;
        for (int s = 0; s < torus.site_count(); ++s)
            expect.set_site(s, f(torus.site_position(s)) * psi.site(s));
        rep.add(make_check("zero-time action multiplies by f", "t=0",
                           (out.amp - expect.amp).cwiseAbs().maxCoeff(), 1e-14 * scale));
    }

    // Flat connection, commensurate constant flow: pure lattice translation.
    {
        LatticeSpinor psi = random_spinor(torus, rep_dim, rng);
        VectorField x = VectorField::constant(torus, Vec3(1.0, 0.0, 0.0));
        const double t = 2.0 * torus.spacing();
        Connection flat(torus, rep_dim);
        LatticeSpinor out = apply_holonomy_diffeo({}, x, t, flat, psi, {8, true});
        LatticeSpinor expect(torus, rep_dim);
        for (int s = 0; s < torus.site_count(); ++s) {
            Eigen::Vector3i c = torus.site_coords(s);
            int shifted = torus.site_index(
                (c[0] + torus.sites_per_axis - 2) % torus.sites_per_axis, c[1], c[2]);
            expect.set_site(s, psi.site(shifted));
        }
        rep.add(make_check("flat transport is a lattice translation", "t=2h",
                           (out.amp - expect.amp).cwiseAbs().maxCoeff(), 1e-13 * scale));
    }

    // Constant X, constant ∇, plane-wave ψ against the analytic formula:
    // O(h²) via self-convergence against the doubled lattice.
    {
        auto case_error = [&](int nsites) {
            LatticeTorus tt = build_torus(nsites, l);
            VectorField x = VectorField::constant(tt, Vec3(1.0, 0.0, 0.0));
            const double t = 0.171; // deliberately off-lattice
            Connection conn(tt, rep_dim);
            MatC a = 0.8 * gens[2];
            for (int s = 0; s < tt.site_count(); ++s) conn.at(0, s) = a;
            LatticeSpinor psi = plane_wave_spinor(tt, rep_dim, {1, 0, 0});
            LatticeSpinor out = apply_holonomy_diffeo({}, x, t, conn, psi, {32, true});
            MatC hol = (-t * a).exp();
            double worst = 0.0;
            for (int s = 0; s < tt.site_count(); ++s) {
                Vec3 p = tt.site_position(s);
                Vec3 src = p - t * Vec3(1.0, 0.0, 0.0);
                double phase = 2.0 * M_PI * src[0] / l;
                VecC v = VecC::Zero(rep_dim);
                v[0] = std::exp(Complex(0.0, phase)) /
                       std::sqrt(tt.cell_volume() * tt.site_count());
                VecC expect = hol * v;
                worst = std::max(worst, (out.site(s) - expect).cwiseAbs().maxCoeff());
            }
            return worst;
        };
        double coarse = case_error(cfg.lattice_sites);
        double fine = case_error(2 * cfg.lattice_sites);
        double ratio = coarse / fine;
        CheckRecord c;
        c.operation = "plane-wave transport O(h²) self-convergence";
        c.parameters = "coarse=" + format_double(coarse) + " fine=" +
                       format_double(fine) + " ratio=" + format_double(ratio);
        c.residual = std::abs(ratio - 4.0);
        c.tolerance = 1.6; // ratio within [2.4, 5.6]
        c.pass = ratio > 2.4 && ratio < 5.6;
        rep.add(c);
    }

    // Adjoint action: reduces to the plain pullback at ∇ = 0, linear in ω.
    {
        OneForm omega = basis.coords_to_connection(coords);
        Connection flat(torus, rep_dim);
        VectorField x = VectorField::sample(torus, [l](const Vec3& p) {
            return Vec3(0.4, 0.2 * std::sin(2.0 * M_PI * p[0] / l), 0.0);
        });
        OneForm adj = adjoint_flow_on_oneform(x, 0.4, flat, omega, 24);
        OneForm pull = pullback_oneform(torus, x, 0.4, omega, 24);
        rep.add(make_check("adjoint action at flat connection equals pullback", "t=0.4",
                           adj.max_abs_diff(pull), 0.0));

        OneForm zero(torus, rep_dim);
        OneForm adj_zero = adjoint_flow_on_oneform(x, 0.4, smooth, zero, 24);
        rep.add(make_check("adjoint action vanishes on zero form", "t=0.4",
                           adj_zero.max_abs_diff(zero), 0.0));

        OneForm a1 = adjoint_flow_on_oneform(x, 0.4, smooth, omega, 24);
        OneForm omega2 = omega;
        omega2 *= 1.75;
        OneForm a2 = adjoint_flow_on_oneform(x, 0.4, smooth, omega2, 24);
        OneForm scaled = a1;
        scaled *= 1.75;
        rep.add(make_check("adjoint action real-linear", "scale 1.75",
                           a2.max_abs_diff(scaled), 1e-12 * scale));

        rep.add(make_check("adjoint action at t=0 is the identity", "t=0",
                           adjoint_flow_on_oneform(x, 0.0, smooth, omega, 24)
                               .max_abs_diff(omega),
                           0.0));
    }

    // Negative control: compressible flow with the volume factor disabled.
    // The probe needs a modulus gradient along the compression direction,
    // otherwise the measure distortion is invisible to the norm.
    {
        VectorField x = VectorField::sample(torus, [l](const Vec3& p) {
            return Vec3(0.5 * std::sin(2.0 * M_PI * p[0] / l), 0.0, 0.0);
        });
        LatticeSpinor psi(torus, rep_dim);
        for (int s = 0; s < torus.site_count(); ++s) {
            VecC v = VecC::Zero(rep_dim);
            v[0] = 1.0 + 0.8 * std::cos(2.0 * M_PI * torus.site_position(s)[0] / l);
            psi.set_site(s, v);
        }
        psi.amp /= std::sqrt(torus.cell_volume()) * psi.amp.norm();
        Connection flat(torus, rep_dim);
        LatticeSpinor with = apply_holonomy_diffeo({}, x, 0.5, flat, psi, {32, true});
        LatticeSpinor without = apply_holonomy_diffeo({}, x, 0.5, flat, psi, {32, false});
        double drift_with = std::abs(with.norm() - psi.norm());
        double drift_without = std::abs(without.norm() - psi.norm());
        rep.add(lower_bound_check("norm drift without volume factor (negative control)",
                                  "div X != 0, t=0.5", drift_without, 1e-3));
        rep.add(make_check("volume factor restores the norm",
                           "drift_without=" + format_double(drift_without),
                           drift_with, std::max(drift_without / 5.0, 2e-2)));
    }

    // Serialization: bit-exact round-trip.
    {
        std::string path = join_path(out_dir, "connection.bin");
        save_gauge_form(smooth, path);
        GaugeOneForm back = load_gauge_form(path);
        rep.add(make_check("connection file round-trips bit-exactly", path,
                           back.max_abs_diff(smooth), 0.0));
        rep.artifacts.push_back("connection.bin");
    }
    return rep;
}

SuiteReport run_sobolev_suite(const ExperimentConfig& cfg, const std::string& out_dir) {
    SuiteReport rep;
    rep.name = "sobolev";
    const double scale = cfg.tolerance_scale;
    LatticeTorus torus = build_torus(cfg.lattice_sites, cfg.box_length);
    SobolevParams params{cfg.tau1, cfg.sigma};
    const int rep_dim = cfg.rep_dim;
    const auto gens = su_basis(rep_dim);
    DeterministicRng rng(cfg.seed + 2);
    const std::string tag = "N=" + std::to_string(torus.sites_per_axis) +
                            " tau1=" + format_double(cfg.tau1) +
                            " sigma=" + format_double(cfg.sigma);

    // Harmonic forms: eigenvalue exactly zero.
    {
        GaugeOneForm constant(torus, rep_dim);
        for (int s = 0; s < torus.site_count(); ++s) constant.at(1, s) = 0.7 * gens[0];
        GaugeOneForm lap = hodge_laplacian_apply(constant);
        rep.add(make_check("constant one-form is harmonic", tag,
                           lap.max_abs_diff(GaugeOneForm(torus, rep_dim)), 0.0));
    }

    // Plane-wave eigenvalue matches the discrete symbol.
    {
        double worst = 0.0;
        for (Eigen::Vector3i k :
             {Eigen::Vector3i{1, 0, 0}, {0, 1, 0}, {1, 2, 0}, {2, 2, 1}}) {
            for (int trig : {0, 1}) {
                VecR mode = scalar_mode_vector(torus, ScalarModeKey{0.0, k, trig, 1});
                double lambda = laplacian_symbol(torus, k);
                VecR resid = hodge_laplacian_apply(torus, mode) - lambda * mode;
                worst = std::max(worst, resid.cwiseAbs().maxCoeff() / lambda);
            }
        }
        rep.add(make_check("plane waves diagonalize the Laplacian at the symbol", tag,
                           worst, 1e-12 * scale));
    }

    // dδ + δd equals the componentwise stencil (flat-torus cancellation).
    {
        VecR u(3 * torus.site_count());
        for (long i = 0; i < u.size(); ++i) u[i] = rng.symmetric();
        VecR dec_route = hodge_laplacian_apply(torus, u);
        // componentwise stencil via the g-valued form with a single generator
        GaugeOneForm w(torus, rep_dim);
        for (int a = 0; a < 3; ++a)
            for (int s = 0; s < torus.site_count(); ++s)
                w.at(a, s) = u[a * torus.site_count() + s] * gens[0];
        GaugeOneForm lap = hodge_laplacian_apply(w);
        double worst = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int s = 0; s < torus.site_count(); ++s) {
                double got =
                    lie_inner(gens[0], lap.at(a, s)).real();
                worst = std::max(worst,
                                 std::abs(got - dec_route[a * torus.site_count() + s]));
            }
        double ref = dec_route.cwiseAbs().maxCoeff();
        rep.add(make_check("dδ+δd reduces to the componentwise stencil", tag,
                           worst / std::max(1.0, ref), 1e-13 * scale));
    }

    // Self-adjointness of Δ.
    {
        VecR u(3 * torus.site_count()), v(3 * torus.site_count());
        for (long i = 0; i < u.size(); ++i) {
            u[i] = rng.symmetric();
            v[i] = rng.symmetric();
        }
        double left = hodge_laplacian_apply(torus, u).dot(v);
        double right = u.dot(hodge_laplacian_apply(torus, v));
        rep.add(make_check("laplacian symmetric", tag,
                           std::abs(left - right) /
                               std::max(1.0, std::abs(left)),
                           1e-12 * scale));
    }

    SobolevBasis basis = build_sobolev_basis(torus, params, cfg.basis_size, rep_dim);

    // Gram matrix under the literal Sobolev product.
    {
        std::vector<GaugeOneForm> weighted;
        weighted.reserve(basis.size());
        for (int i = 0; i < basis.size(); ++i)
            weighted.push_back(apply_sobolev_weight(basis.xi(i), params));
        double worst = 0.0;
        for (int i = 0; i < basis.size(); ++i)
            for (int j = i; j < basis.size(); ++j) {
                Complex g = l2_inner(weighted[i], weighted[j]);
                double expect = (i == j) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(g - Complex(expect)));
            }
        rep.add(make_check("basis orthonormal under the Sobolev product", tag, worst,
                           1e-10 * scale));
    }

    // Harmonic sector and the first nonzero eigenvalue.
    {
        const int harmonic_count = 3 * (rep_dim * rep_dim - 1);
        double worst = 0.0;
        for (int i = 0; i < std::min(basis.size(), harmonic_count); ++i)
            worst = std::max(worst, std::abs(basis.lambda(i)));
        rep.add(make_check("harmonic sector has eigenvalue zero",
                           "count=" + std::to_string(harmonic_count), worst, 0.0));
        if (basis.size() > harmonic_count) {
            double expected =
                laplacian_symbol(torus, Eigen::Vector3i{1, 0, 0});
            rep.add(make_check("first nonzero eigenvalue matches |k|=1 symbol", tag,
                               std::abs(basis.lambda(harmonic_count) - expected),
                               1e-12 * scale));
        }
    }

    // Eigenform Sobolev norm: (1+τ₁λ^σ)² times the L² norm².
    {
        double worst = 0.0;
        for (int i : {0, basis.size() / 2, basis.size() - 1}) {
            OneForm e = basis.eigenform(i);
            double w = basis.weight(i);
            double sob = std::abs(sobolev_inner(e, e, params));
            double l2 = std::abs(l2_inner(e, e));
            worst = std::max(worst, std::abs(sob - w * w * l2) / (w * w * l2));
        }
        rep.add(make_check("eigenform Sobolev norm carries the squared weight", tag,
                           worst, 1e-10 * scale));
    }

    // The inverse weight map is an isometry L² → H^s.
    {
        VecR c = VecR::Zero(basis.size());
        for (int i = 0; i < basis.size(); ++i) c[i] = rng.symmetric();
        GaugeOneForm eta(torus, rep_dim);
        for (int i = 0; i < basis.size(); ++i) {
            OneForm e = basis.eigenform(i);
            e *= c[i];
            eta += e;
        }
        GaugeOneForm mapped = spectral_apply(
            eta, [&](double lambda) { return 1.0 / params.weight(lambda); });
        double lhs = sobolev_norm(mapped, params);
        double rhs = l2_norm(eta);
        rep.add(make_check("(1+τ₁Δ^σ)^{-1} is an isometry onto H^s", tag,
                           std::abs(lhs - rhs) / rhs, 1e-10 * scale));
    }

    // UV suppression: L² norms of ξ_i decay monotonically as 1/(1+τ₁λ^σ).
    {
        double worst_value = 0.0, worst_monotone = 0.0;
        double previous = std::numeric_limits<double>::infinity();
        for (int i = 0; i < basis.size(); ++i) {
            double l2 = l2_norm(basis.xi(i));
            worst_value = std::max(worst_value,
                                   std::abs(l2 - 1.0 / basis.weight(i)));
            worst_monotone = std::max(worst_monotone, l2 - previous);
            previous = l2;
        }
        rep.add(make_check("UV suppression of basis vectors", tag, worst_value,
                           1e-12 * scale));
        rep.add(make_check("suppression monotone along the ordering", tag,
                           worst_monotone, 1e-12 * scale));
    }

    // Coordinates round-trip through the configuration space.
    {
        VecR x = VecR::Zero(basis.size());
        for (int i = 0; i < basis.size(); ++i) x[i] = rng.symmetric();
        Connection conn = basis.coords_to_connection(x);
        VecR back = basis.coefficients(conn);
        rep.add(make_check("configuration coordinates round-trip", tag,
                           (back - x).cwiseAbs().maxCoeff(), 1e-10 * scale));
        VecR zero = VecR::Zero(basis.size());
        rep.add(make_check("zero coordinates give the zero connection", tag,
                           basis.coords_to_connection(zero).max_abs_diff(
                               GaugeOneForm(torus, rep_dim)),
                           0.0));
        VecR e1 = VecR::Zero(basis.size());
        e1[0] = 1.0;
        rep.add(make_check("unit coordinate gives the first basis vector", tag,
                           basis.coords_to_connection(e1).max_abs_diff(basis.xi(0)),
                           1e-15 * scale));
    }

    // Two routes to the inner product agree inside the span.
    {
        VecR a = VecR::Zero(basis.size()), bvec = VecR::Zero(basis.size());
        for (int i = 0; i < basis.size(); ++i) {
            a[i] = rng.symmetric();
            bvec[i] = rng.symmetric();
        }
        GaugeOneForm wa = basis.coords_to_connection(a);
        GaugeOneForm wb = basis.coords_to_connection(bvec);
        Complex direct = sobolev_inner(wa, wb, params);
        double viacoeff = a.dot(bvec);
        rep.add(make_check("inner product agrees with the coefficient route", tag,
                           std::abs(direct - Complex(viacoeff)), 1e-9 * scale));
    }

    // Cache round-trip.
    {
        std::string path = join_path(out_dir, "sobolev_basis.bin");
        save_sobolev_basis(basis, path);
        SobolevBasis back = load_sobolev_basis(path);
        double worst = 0.0;
        for (int i = 0; i < basis.size(); ++i) {
            worst = std::max(worst, std::abs(back.lambda(i) - basis.lambda(i)));
            worst = std::max(worst,
                             (back.scalar(i) - basis.scalar(i)).cwiseAbs().maxCoeff());
        }
        rep.add(make_check("basis cache round-trips bit-exactly", path, worst, 0.0));
        rep.artifacts.push_back("sobolev_basis.bin");
    }

    // Basis CSV: eigenvalues and weights with the tie-break metadata.
    {
        CsvWriter csv(join_path(out_dir, "sobolev_basis.csv"),
                      {"index", "lambda", "weight", "k0", "k1", "k2", "trig", "axis",
                       "lie"});
        for (int i = 0; i < basis.size(); ++i) {
            const auto& m = basis.info(i);
            csv.numeric_row({static_cast<double>(i), m.lambda, basis.weight(i),
                             static_cast<double>(m.k[0]), static_cast<double>(m.k[1]),
                             static_cast<double>(m.k[2]), static_cast<double>(m.trig),
                             static_cast<double>(m.axis), static_cast<double>(m.lie)});
        }
        rep.artifacts.push_back("sobolev_basis.csv");
    }
    return rep;
}

} // namespace qhl
