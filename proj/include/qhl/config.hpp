#ifndef QHL_CONFIG_HPP
#define QHL_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qhl {

/// Flat key-value configuration with sections; the seed is the sole source
/// of nondeterminism. Unknown keys are rejected with the list of known ones.
struct ExperimentConfig {
    // [lattice]
    int lattice_sites = 8;
    double box_length = 1.0;
    // [gauge]
    int rep_dim = 2;
    // [sobolev]
    double tau1 = 1.0;
    double sigma = 2.0;
    int basis_size = 12;
    // [modes]
    double tau2 = 1.0;
    std::string s_preset = "linear"; // linear | unit | custom
    std::vector<double> s_values;    // used when s_preset = custom
    int levels = 12;
    // [truncation]
    int bott_modes = 2;
    int boson_modes = 2;
    int fermion_modes = 3;
    int k_max = 3;
    // [quadrature]
    int quadrature_order = 14;
    // [tolerances]
    double tolerance_scale = 1.0;
    // [fock]
    std::string fock_local_function; // must stay empty: global algebra only
    // [run]
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    void validate() const;
    std::vector<double> s_sequence(int count) const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_text(const ExperimentConfig& cfg);

} // namespace qhl

#endif
