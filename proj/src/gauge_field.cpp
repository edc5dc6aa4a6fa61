#include "qhl/gauge_field.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace qhl {

GaugeOneForm::GaugeOneForm(const LatticeTorus& torus, int rep_dim)
    : torus_(torus), rep_dim_(rep_dim),
      comp_(3 * torus.site_count(), MatC::Zero(rep_dim, rep_dim)) {
    if (rep_dim < 1) throw std::invalid_argument("GaugeOneForm: rep_dim must be >= 1");
}

MatC GaugeOneForm::sample(int axis, const Vec3& p) const {
    TrilinearStencil st = trilinear_stencil(torus_, p);
    MatC v = MatC::Zero(rep_dim_, rep_dim_);
    for (int c = 0; c < 8; ++c) v += st.weight[c] * at(axis, st.corner[c]);
    return v;
}

MatC GaugeOneForm::contract(const Vec3& p, const Vec3& v) const {
    TrilinearStencil st = trilinear_stencil(torus_, p);
    MatC out = MatC::Zero(rep_dim_, rep_dim_);
    for (int c = 0; c < 8; ++c) {
        const int site = st.corner[c];
        const double w = st.weight[c];
        for (int a = 0; a < 3; ++a)
            if (v[a] != 0.0) out += (w * v[a]) * at(a, site);
    }
    return out;
}

GaugeOneForm& GaugeOneForm::operator+=(const GaugeOneForm& other) {
    if (!same_lattice(other))
        throw std::invalid_argument("GaugeOneForm: lattice mismatch in +=");
    for (size_t i = 0; i < comp_.size(); ++i) comp_[i] += other.comp_[i];
    return *this;
}

GaugeOneForm& GaugeOneForm::operator*=(double scale) {
    for (auto& m : comp_) m *= scale;
    return *this;
}

double GaugeOneForm::anti_hermiticity_defect() const {
    double worst = 0.0;
    for (const auto& m : comp_)
        worst = std::max(worst, qhl::anti_hermiticity_defect(m));
    return worst;
}

double GaugeOneForm::max_abs_diff(const GaugeOneForm& other) const {
    double worst = 0.0;
    for (size_t i = 0; i < comp_.size(); ++i)
        worst = std::max(worst, (comp_[i] - other.comp_[i]).cwiseAbs().maxCoeff());
    return worst;
}

VecC LatticeSpinor::sample(const Vec3& p) const {
    TrilinearStencil st = trilinear_stencil(torus, p);
    VecC v = VecC::Zero(rep_dim);
    for (int c = 0; c < 8; ++c) v += st.weight[c] * site(st.corner[c]);
    return v;
}

GaugeOneForm pullback_oneform(const LatticeTorus& torus, const VectorField& X,
                              double t, const GaugeOneForm& omega, int steps) {
    GaugeOneForm out(torus, omega.rep_dim());
    const VectorField back = X.negated();
    for (int site = 0; site < torus.site_count(); ++site) {
        const Vec3 p = torus.site_position(site);
        FlowMap fm = flow_with_jacobian(torus, back, p, t, steps);
        // (φ*ω)_a(p) = Σ_b ω_b(φ(p)) (Dφ)_{b,a}
        MatC pulled[3];
        for (int b = 0; b < 3; ++b) pulled[b] = omega.sample(b, fm.end);
        for (int a = 0; a < 3; ++a) {
            MatC v = MatC::Zero(omega.rep_dim(), omega.rep_dim());
            for (int b = 0; b < 3; ++b) v += fm.jacobian(b, a) * pulled[b];
            out.at(a, site) = v;
        }
    }
    return out;
}

namespace {

constexpr std::uint32_t kFormatVersion = 1;

} // namespace

void save_gauge_form(const GaugeOneForm& form, const std::string& path) {
    nlohmann::ordered_json header;
    header["format"] = "qhl-gauge-form";
    header["version"] = kFormatVersion;
    header["rep_dim"] = form.rep_dim();
    header["sites_per_axis"] = form.torus().sites_per_axis;
    header["box_length"] = form.torus().box_length;
    header["axis_order"] = "x,y,z";
    header["layout"] = "site-major per axis, row-major matrices, re/im pairs";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_gauge_form: cannot open " + path);
    out << header.dump() << '\n';
    const int n = form.rep_dim();
    for (int axis = 0; axis < 3; ++axis)
        for (int site = 0; site < form.torus().site_count(); ++site) {
            const MatC& m = form.at(axis, site);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    double re = m(r, c).real(), im = m(r, c).imag();
                    out.write(reinterpret_cast<const char*>(&re), sizeof(double));
                    out.write(reinterpret_cast<const char*>(&im), sizeof(double));
                }
        }
    if (!out) throw std::runtime_error("save_gauge_form: write failed for " + path);
}

GaugeOneForm load_gauge_form(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_gauge_form: cannot open " + path);
    std::string header_line;
    std::getline(in, header_line);
    auto header = nlohmann::json::parse(header_line);
    if (header.at("format") != "qhl-gauge-form")
        throw std::runtime_error("load_gauge_form: unrecognized format in " + path);
    if (header.at("version").get<std::uint32_t>() != kFormatVersion)
        throw std::runtime_error("load_gauge_form: unsupported version in " + path);
    const int n = header.at("rep_dim").get<int>();
    const int sites = header.at("sites_per_axis").get<int>();
    const double box = header.at("box_length").get<double>();

    GaugeOneForm form(build_torus(sites, box), n);
    for (int axis = 0; axis < 3; ++axis)
        for (int site = 0; site < form.torus().site_count(); ++site) {
            MatC m(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    double re = 0.0, im = 0.0;
                    in.read(reinterpret_cast<char*>(&re), sizeof(double));
                    in.read(reinterpret_cast<char*>(&im), sizeof(double));
                    m(r, c) = Complex(re, im);
                }
            form.at(axis, site) = m;
        }
    if (!in) throw std::runtime_error("load_gauge_form: truncated file " + path);
    return form;
}

} // namespace qhl
