#include "qhl/sobolev.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <tuple>

namespace qhl {

void SobolevParams::validate() const {
    if (!(tau1 > 0.0)) throw std::invalid_argument("SobolevParams: tau1 must be > 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("SobolevParams: sigma must be > 0");
}

double SobolevParams::weight(double lambda) const {
    return 1.0 + tau1 * std::pow(lambda, sigma);
}

namespace {

Eigen::Vector3i signed_rep(const Eigen::Vector3i& k, int n) {
    Eigen::Vector3i s;
    for (int j = 0; j < 3; ++j) {
        int m = ((k[j] % n) + n) % n;
        s[j] = (2 * m <= n) ? m : m - n;
    }
    return s;
}

// signed rep of -k: Nyquist components are their own negatives
Eigen::Vector3i negated_rep(const Eigen::Vector3i& ks, int n) {
    Eigen::Vector3i m;
    for (int j = 0; j < 3; ++j) m[j] = (2 * ks[j] == n) ? ks[j] : -ks[j];
    return m;
}

bool self_conjugate(const Eigen::Vector3i& ks, int n) {
    return ks == negated_rep(ks, n);
}

// exactly one of {k, -k} is canonical; self-conjugate vectors are their own
// partner
bool canonical(const Eigen::Vector3i& ks, int n) {
    Eigen::Vector3i m = negated_rep(ks, n);
    for (int j = 0; j < 3; ++j) {
        if (ks[j] > m[j]) return true;
        if (ks[j] < m[j]) return false;
    }
    return true;
}

// Enumerate canonical wave vectors together with their trig multiplicity.
template <typename Fn>
void for_each_canonical_mode(const LatticeTorus& torus, Fn&& fn) {
    const int n = torus.sites_per_axis;
    Eigen::Vector3i k;
    for (k[2] = 0; k[2] < n; ++k[2])
        for (k[1] = 0; k[1] < n; ++k[1])
            for (k[0] = 0; k[0] < n; ++k[0]) {
                Eigen::Vector3i ks = signed_rep(k, n);
                if (!canonical(ks, n)) continue;
                const bool self = self_conjugate(ks, n);
                fn(ks, self ? 1 : 2); // cos only, or cos + sin
            }
}

} // namespace

std::vector<ScalarModeKey> scalar_mode_keys(const LatticeTorus& torus) {
    std::vector<ScalarModeKey> keys;
    keys.reserve(3 * torus.site_count());
    for_each_canonical_mode(torus, [&](const Eigen::Vector3i& ks, int trigs) {
        const double lambda = laplacian_symbol(torus, ks);
        for (int trig = 0; trig < trigs; ++trig)
            for (int axis = 0; axis < 3; ++axis)
                keys.push_back(ScalarModeKey{lambda, ks, trig, axis});
    });
    std::sort(keys.begin(), keys.end(), [](const ScalarModeKey& a, const ScalarModeKey& b) {
        return std::tie(a.lambda, a.k[0], a.k[1], a.k[2], a.trig, a.axis) <
               std::tie(b.lambda, b.k[0], b.k[1], b.k[2], b.trig, b.axis);
    });
    if (static_cast<int>(keys.size()) != 3 * torus.site_count())
        throw std::logic_error("scalar_mode_keys: mode count mismatch");
    return keys;
}

VecR scalar_mode_site_values(const LatticeTorus& torus, const Eigen::Vector3i& k,
                             int trig) {
    const int n = torus.sites_per_axis;
    const int sites = torus.site_count();
    VecR v(sites);
    for (int s = 0; s < sites; ++s) {
        Eigen::Vector3i c = torus.site_coords(s);
        long phase = 0;
        for (int j = 0; j < 3; ++j) phase += static_cast<long>(k[j]) * c[j];
        int m = static_cast<int>(((phase % n) + n) % n);
        double theta = 2.0 * M_PI * m / n;
        v[s] = (trig == 0) ? std::cos(theta) : std::sin(theta);
    }
    double norm = std::sqrt(torus.cell_volume() * v.squaredNorm());
    if (norm <= 0.0) throw std::logic_error("scalar_mode_site_values: null mode");
    return v / norm;
}

VecR scalar_mode_vector(const LatticeTorus& torus, const ScalarModeKey& key) {
    const int sites = torus.site_count();
    VecR full = VecR::Zero(3 * sites);
    full.segment(key.axis * sites, sites) = scalar_mode_site_values(torus, key.k, key.trig);
    return full;
}

GaugeOneForm spectral_apply(const GaugeOneForm& omega,
                            const std::function<double(double)>& fn) {
    const LatticeTorus& torus = omega.torus();
    const int sites = torus.site_count();
    const int nrep = omega.rep_dim();
    const auto gens = su_basis(nrep);
    const int g = static_cast<int>(gens.size());
    const double vol = torus.cell_volume();

    // Lie components z_α of ω (complex to cover complexified inputs).
    std::vector<VecC> z(g, VecC::Zero(3 * sites));
    for (int a = 0; a < 3; ++a)
        for (int s = 0; s < sites; ++s)
            for (int alpha = 0; alpha < g; ++alpha)
                z[alpha][a * sites + s] = lie_inner(gens[alpha], omega.at(a, s));

    std::vector<VecC> out_z(g, VecC::Zero(3 * sites));
    for_each_canonical_mode(torus, [&](const Eigen::Vector3i& ks, int trigs) {
        const double w = fn(laplacian_symbol(torus, ks));
        for (int trig = 0; trig < trigs; ++trig) {
            VecR site_vals = scalar_mode_site_values(torus, ks, trig);
            for (int axis = 0; axis < 3; ++axis)
                for (int alpha = 0; alpha < g; ++alpha) {
                    Complex c = vol * site_vals.cast<Complex>().dot(
                                          z[alpha].segment(axis * sites, sites));
                    out_z[alpha].segment(axis * sites, sites) +=
                        (w * c) * site_vals.cast<Complex>();
                }
        }
    });

    GaugeOneForm out(torus, nrep);
    for (int a = 0; a < 3; ++a)
        for (int s = 0; s < sites; ++s) {
            MatC m = MatC::Zero(nrep, nrep);
            for (int alpha = 0; alpha < g; ++alpha)
                m += out_z[alpha][a * sites + s] * gens[alpha];
            out.at(a, s) = m;
        }
    return out;
}

GaugeOneForm apply_sobolev_weight(const GaugeOneForm& omega, const SobolevParams& p) {
    p.validate();
    return spectral_apply(omega, [&](double lambda) { return p.weight(lambda); });
}

Complex l2_inner(const GaugeOneForm& w1, const GaugeOneForm& w2) {
    if (!w1.same_lattice(w2)) throw std::invalid_argument("l2_inner: lattice mismatch");
    Complex acc = 0.0;
    const int sites = w1.torus().site_count();
    for (int a = 0; a < 3; ++a)
        for (int s = 0; s < sites; ++s) acc += lie_inner(w1.at(a, s), w2.at(a, s));
    return w1.torus().cell_volume() * acc;
}

double l2_norm(const GaugeOneForm& w) { return std::sqrt(std::abs(l2_inner(w, w))); }

Complex sobolev_inner(const GaugeOneForm& w1, const GaugeOneForm& w2,
                      const SobolevParams& p) {
    if (!w1.same_lattice(w2))
        throw std::invalid_argument("sobolev_inner: lattice mismatch");
    return l2_inner(apply_sobolev_weight(w1, p), apply_sobolev_weight(w2, p));
}

double sobolev_norm(const GaugeOneForm& w, const SobolevParams& p) {
    return std::sqrt(std::abs(sobolev_inner(w, w, p)));
}

SobolevBasis::SobolevBasis(const LatticeTorus& torus, int rep_dim,
                           const SobolevParams& params, int truncation)
    : torus_(torus), rep_dim_(rep_dim), params_(params) {
    params.validate();
    generators_ = su_basis(rep_dim);
    const int g = static_cast<int>(generators_.size());
    const long total = static_cast<long>(3) * torus.site_count() * g;
    if (truncation < 1 || truncation > total)
        throw std::invalid_argument(
            "SobolevBasis: truncation must be in [1, 3 N³ dim g]");

    const auto keys = scalar_mode_keys(torus);
    modes_.reserve(truncation);
    scalar_.reserve(truncation);
    for (const auto& key : keys) {
        VecR vec;
        bool have_vec = false;
        for (int lie = 0; lie < g; ++lie) {
            if (static_cast<int>(modes_.size()) == truncation) return;
            if (!have_vec) {
                vec = scalar_mode_vector(torus, key);
                have_vec = true;
            }
            modes_.push_back(ModeInfo{key.lambda, key.k, key.trig, key.axis, lie});
            scalar_.push_back(vec);
        }
    }
}

OneForm SobolevBasis::xi(int i) const {
    OneForm form(torus_, rep_dim_);
    const int sites = torus_.site_count();
    const double inv_w = 1.0 / weight(i);
    const MatC& gen = generators_[modes_[i].lie];
    for (int a = 0; a < 3; ++a)
        for (int s = 0; s < sites; ++s)
            form.at(a, s) = (inv_w * scalar_[i][a * sites + s]) * gen;
    return form;
}

OneForm SobolevBasis::eigenform(int i) const {
    OneForm form = xi(i);
    form *= weight(i);
    return form;
}

VecR SobolevBasis::l2_coefficients(const GaugeOneForm& omega) const {
    if (!(omega.torus() == torus_) || omega.rep_dim() != rep_dim_)
        throw std::invalid_argument("SobolevBasis: form does not match basis lattice");
    const int sites = torus_.site_count();
    const int g = static_cast<int>(generators_.size());
    std::vector<VecR> r(g, VecR::Zero(3 * sites));
    for (int a = 0; a < 3; ++a)
        for (int s = 0; s < sites; ++s)
            for (int alpha = 0; alpha < g; ++alpha)
                r[alpha][a * sites + s] =
                    lie_inner(generators_[alpha], omega.at(a, s)).real();
    VecR c(size());
    const double vol = torus_.cell_volume();
    for (int i = 0; i < size(); ++i)
        c[i] = vol * scalar_[i].dot(r[modes_[i].lie]);
    return c;
}

VecR SobolevBasis::coefficients(const GaugeOneForm& omega) const {
    VecR c = l2_coefficients(omega);
    for (int i = 0; i < size(); ++i) c[i] *= weight(i);
    return c;
}

Connection SobolevBasis::coords_to_connection(const VecR& x) const {
    if (x.size() != size())
        throw std::invalid_argument("coords_to_connection: coordinate count mismatch");
    const int sites = torus_.site_count();
    const int g = static_cast<int>(generators_.size());
    std::vector<VecR> acc(g, VecR::Zero(3 * sites));
    for (int i = 0; i < size(); ++i) {
        if (x[i] == 0.0) continue;
        acc[modes_[i].lie] += (x[i] / weight(i)) * scalar_[i];
    }
    Connection conn(torus_, rep_dim_);
    for (int a = 0; a < 3; ++a)
        for (int s = 0; s < sites; ++s) {
            MatC m = MatC::Zero(rep_dim_, rep_dim_);
            for (int alpha = 0; alpha < g; ++alpha) {
                double v = acc[alpha][a * sites + s];
                if (v != 0.0) m += v * generators_[alpha];
            }
            conn.at(a, s) = m;
        }
    return conn;
}

double SobolevBasis::relative_leakage(const GaugeOneForm& omega) const {
    const double total = sobolev_norm(omega, params_);
    if (total == 0.0) return 0.0;
    VecR c = coefficients(omega);
    double inside = c.squaredNorm();
    double leak_sq = total * total - inside;
    if (leak_sq < 0.0) leak_sq = 0.0;
    return std::sqrt(leak_sq) / total;
}

SobolevBasis SobolevBasis::select(const std::vector<int>& indices) const {
    SobolevBasis sub;
    sub.torus_ = torus_;
    sub.rep_dim_ = rep_dim_;
    sub.params_ = params_;
    sub.generators_ = generators_;
    for (int idx : indices) {
        if (idx < 0 || idx >= size())
            throw std::invalid_argument("SobolevBasis::select: index out of range");
        sub.modes_.push_back(modes_[idx]);
        sub.scalar_.push_back(scalar_[idx]);
    }
    return sub;
}

SobolevBasis build_sobolev_basis(const LatticeTorus& torus, const SobolevParams& params,
                                 int truncation, int rep_dim) {
    return SobolevBasis(torus, rep_dim, params, truncation);
}

namespace {
constexpr std::uint32_t kBasisVersion = 1;
}

void save_sobolev_basis(const SobolevBasis& basis, const std::string& path) {
    nlohmann::ordered_json header;
    header["format"] = "qhl-sobolev-basis";
    header["version"] = kBasisVersion;
    header["sites_per_axis"] = basis.torus().sites_per_axis;
    header["box_length"] = basis.torus().box_length;
    header["rep_dim"] = basis.rep_dim();
    header["tau1"] = basis.params().tau1;
    header["sigma"] = basis.params().sigma;
    header["count"] = basis.size();
    header["tie_break"] = "(lambda, k lex, cos<sin, axis, lie)";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_sobolev_basis: cannot open " + path);
    out << header.dump() << '\n';
    for (int i = 0; i < basis.size(); ++i) {
        const auto& m = basis.info(i);
        double lambda = m.lambda;
        std::int32_t meta[5] = {m.k[0], m.k[1], m.k[2],
                                static_cast<std::int32_t>(m.trig) |
                                    (static_cast<std::int32_t>(m.axis) << 8),
                                static_cast<std::int32_t>(m.lie)};
        out.write(reinterpret_cast<const char*>(&lambda), sizeof(double));
        out.write(reinterpret_cast<const char*>(meta), sizeof(meta));
        const VecR& v = basis.scalar(i);
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("save_sobolev_basis: write failed for " + path);
}

SobolevBasis load_sobolev_basis(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_sobolev_basis: cannot open " + path);
    std::string header_line;
    std::getline(in, header_line);
    auto header = nlohmann::json::parse(header_line);
    if (header.at("format") != "qhl-sobolev-basis")
        throw std::runtime_error("load_sobolev_basis: unrecognized format");
    if (header.at("version").get<std::uint32_t>() != kBasisVersion)
        throw std::runtime_error("load_sobolev_basis: unsupported version");

    LatticeTorus torus = build_torus(header.at("sites_per_axis").get<int>(),
                                     header.at("box_length").get<double>());
    SobolevParams params{header.at("tau1").get<double>(),
                         header.at("sigma").get<double>()};
    const int rep_dim = header.at("rep_dim").get<int>();
    const int count = header.at("count").get<int>();

    SobolevBasis basis(torus, rep_dim, params, count);
    // Overwrite the freshly built modes with the stored ones so the cache is
    // authoritative even if the tie-break rule evolves.
    for (int i = 0; i < count; ++i) {
        double lambda = 0.0;
        std::int32_t meta[5];
        in.read(reinterpret_cast<char*>(&lambda), sizeof(double));
        in.read(reinterpret_cast<char*>(meta), sizeof(meta));
        VecR v(3 * torus.site_count());
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
        if (!in) throw std::runtime_error("load_sobolev_basis: truncated file");
        SobolevBasis::ModeInfo info;
        info.lambda = lambda;
        info.k = Eigen::Vector3i(meta[0], meta[1], meta[2]);
        info.trig = meta[3] & 0xff;
        info.axis = (meta[3] >> 8) & 0xff;
        info.lie = meta[4];
        basis.overwrite_mode(i, info, v);
    }
    return basis;
}

} // namespace qhl
