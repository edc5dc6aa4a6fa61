#include "qhl/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qhl {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"lattice", {"sites_per_axis", "box_length"}},
    {"gauge", {"rep_dim"}},
    {"sobolev", {"tau1", "sigma", "basis_size"}},
    {"modes", {"tau2", "s_preset", "s_values", "levels"}},
    {"truncation", {"bott_modes", "boson_modes", "fermion_modes", "k_max"}},
    {"quadrature", {"order"}},
    {"tolerances", {"scale"}},
    {"fock", {"local_function"}},
    {"run", {"seed", "out_dir"}},
};

std::string known_keys_for(const std::string& section) {
    auto it = kKnownKeys.find(section);
    if (it == kKnownKeys.end()) return "";
    std::string s;
    for (const auto& k : it->second) s += (s.empty() ? "" : ", ") + k;
    return s;
}

} // namespace

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (lattice_sites < 2) fail("lattice.sites_per_axis must be >= 2");
    if (!(box_length > 0.0)) fail("lattice.box_length must be > 0");
    if (rep_dim < 2) fail("gauge.rep_dim must be >= 2");
    if (!(tau1 > 0.0)) fail("sobolev.tau1 must be > 0");
    if (!(sigma > 0.0)) fail("sobolev.sigma must be > 0");
    long max_basis = 3L * lattice_sites * lattice_sites * lattice_sites *
                     (rep_dim * rep_dim - 1);
    if (basis_size < 1 || basis_size > max_basis)
        fail("sobolev.basis_size must be in [1, 3 N^3 dim g] = [1, " +
             std::to_string(max_basis) + "]");
    if (!(tau2 > 0.0)) fail("modes.tau2 must be > 0");
    if (s_preset != "linear" && s_preset != "unit" && s_preset != "custom")
        fail("modes.s_preset must be linear, unit, or custom");
    if (s_preset == "custom") {
        if (s_values.empty()) fail("modes.s_values required for the custom preset");
        for (size_t i = 0; i < s_values.size(); ++i) {
            if (!(s_values[i] > 0.0)) fail("modes.s_values must be positive");
            if (i > 0 && s_values[i] < s_values[i - 1])
                fail("modes.s_values must be non-decreasing");
        }
    }
    if (levels < 2) fail("modes.levels must be >= 2");
    if (bott_modes < 1) fail("truncation.bott_modes must be >= 1");
    if (boson_modes < 1) fail("truncation.boson_modes must be >= 1");
    if (fermion_modes < 1) fail("truncation.fermion_modes must be >= 1");
    if (k_max < 0 || k_max > fermion_modes)
        fail("truncation.k_max must be in [0, fermion_modes]");
    if (quadrature_order < levels)
        fail("quadrature.order must be >= modes.levels (node sandwich exactness)");
    if (!(tolerance_scale > 0.0)) fail("tolerances.scale must be > 0");
    if (!fock_local_function.empty())
        fail("fock.local_function: the Fock-space representation carries only the "
             "global algebra (no function prefactor); remove this key");
    if (out_dir.empty()) fail("run.out_dir must not be empty");
}

std::vector<double> ExperimentConfig::s_sequence(int count) const {
    std::vector<double> s;
    if (s_preset == "linear")
        for (int i = 1; i <= count; ++i) s.push_back(static_cast<double>(i));
    else if (s_preset == "unit")
        s.assign(count, 1.0);
    else {
        if (static_cast<int>(s_values.size()) < count)
            throw std::invalid_argument("config: modes.s_values has fewer than " +
                                        std::to_string(count) + " entries");
        s.assign(s_values.begin(), s_values.begin() + count);
    }
    return s;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (kKnownKeys.find(section) == kKnownKeys.end())
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unknown section [" + section + "]");
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        auto sec = kKnownKeys.find(section);
        if (sec == kKnownKeys.end())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside any section");
        if (std::find(sec->second.begin(), sec->second.end(), key) == sec->second.end())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "' in [" + section +
                                        "]; known keys: " + known_keys_for(section));
        try {
            if (section == "lattice" && key == "sites_per_axis")
                cfg.lattice_sites = std::stoi(value);
            else if (section == "lattice" && key == "box_length")
                cfg.box_length = std::stod(value);
            else if (section == "gauge" && key == "rep_dim")
                cfg.rep_dim = std::stoi(value);
            else if (section == "sobolev" && key == "tau1")
                cfg.tau1 = std::stod(value);
            else if (section == "sobolev" && key == "sigma")
                cfg.sigma = std::stod(value);
            else if (section == "sobolev" && key == "basis_size")
                cfg.basis_size = std::stoi(value);
            else if (section == "modes" && key == "tau2")
                cfg.tau2 = std::stod(value);
            else if (section == "modes" && key == "s_preset")
                cfg.s_preset = value;
            else if (section == "modes" && key == "s_values")
                cfg.s_values = parse_list(value);
            else if (section == "modes" && key == "levels")
                cfg.levels = std::stoi(value);
            else if (section == "truncation" && key == "bott_modes")
                cfg.bott_modes = std::stoi(value);
            else if (section == "truncation" && key == "boson_modes")
                cfg.boson_modes = std::stoi(value);
            else if (section == "truncation" && key == "fermion_modes")
                cfg.fermion_modes = std::stoi(value);
            else if (section == "truncation" && key == "k_max")
                cfg.k_max = std::stoi(value);
            else if (section == "quadrature" && key == "order")
                cfg.quadrature_order = std::stoi(value);
            else if (section == "tolerances" && key == "scale")
                cfg.tolerance_scale = std::stod(value);
            else if (section == "fock" && key == "local_function")
                cfg.fock_local_function = value;
            else if (section == "run" && key == "seed")
                cfg.seed = std::stoull(value);
            else if (section == "run" && key == "out_dir")
                cfg.out_dir = value;
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": cannot parse value '" + value + "' for " +
                                        section + "." + key);
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_to_text(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "[lattice]\nsites_per_axis = " << cfg.lattice_sites
       << "\nbox_length = " << cfg.box_length << "\n\n[gauge]\nrep_dim = "
       << cfg.rep_dim << "\n\n[sobolev]\ntau1 = " << cfg.tau1
       << "\nsigma = " << cfg.sigma << "\nbasis_size = " << cfg.basis_size
       << "\n\n[modes]\ntau2 = " << cfg.tau2 << "\ns_preset = " << cfg.s_preset;
    if (!cfg.s_values.empty()) {
        os << "\ns_values = ";
        for (size_t i = 0; i < cfg.s_values.size(); ++i)
            os << (i ? "," : "") << cfg.s_values[i];
    }
    os << "\nlevels = " << cfg.levels << "\n\n[truncation]\nbott_modes = "
       << cfg.bott_modes << "\nboson_modes = " << cfg.boson_modes
       << "\nfermion_modes = " << cfg.fermion_modes << "\nk_max = " << cfg.k_max
       << "\n\n[quadrature]\norder = " << cfg.quadrature_order
       << "\n\n[tolerances]\nscale = " << cfg.tolerance_scale
       << "\n\n[run]\nseed = " << cfg.seed << "\nout_dir = " << cfg.out_dir << "\n";
    return os.str();
}

} // namespace qhl
