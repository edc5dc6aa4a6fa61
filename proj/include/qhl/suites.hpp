#ifndef QHL_SUITES_HPP
#define QHL_SUITES_HPP

#include "qhl/config.hpp"
#include "qhl/report.hpp"

#include <vector>

namespace qhl {

/// Deterministic value source for the suites: splitmix-style doubles from
/// mt19937_64, independent of library distribution internals.
class DeterministicRng {
  public:
    explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}
    double uniform();          // [0, 1)
    double symmetric();        // [-1, 1)
    std::uint64_t bits();

  private:
    std::uint64_t state_;
};

SuiteReport run_spectrum_suite(const ExperimentConfig& cfg, const std::string& out_dir);
SuiteReport run_holonomy_suite(const ExperimentConfig& cfg, const std::string& out_dir);
SuiteReport run_sobolev_suite(const ExperimentConfig& cfg, const std::string& out_dir);
SuiteReport run_ccr_suite(const ExperimentConfig& cfg, const std::string& out_dir);
SuiteReport run_continuity_suite(const ExperimentConfig& cfg,
                                 const std::string& out_dir);
SuiteReport run_fock_suite(const ExperimentConfig& cfg, const std::string& out_dir);
SuiteReport run_commutator_profile_suite(const ExperimentConfig& cfg,
                                         const std::string& out_dir);

/// All suites in a fixed order plus summary.json. Byte-identical outputs for
/// identical configs.
std::vector<SuiteReport> run_all_suites(const ExperimentConfig& cfg,
                                        const std::string& out_dir);

/// Run one suite by CLI name (spectrum, holonomy, sobolev, ccr, continuity,
/// fock, commutator-profile, all); writes summary.json for the selection.
std::vector<SuiteReport> run_named_suite(const std::string& name,
                                         const ExperimentConfig& cfg,
                                         const std::string& out_dir);

// Reusable building blocks (the acceptance gate drives these directly).

/// Interior spectrum of B² vs the closed-form multiset for one parameter set;
/// returns the worst absolute deviation over the lowest `count` eigenvalues,
/// the measured kernel dimension, and the most negative eigenvalue.
struct SpectrumCaseResult {
    double multiset_deviation = 0.0;
    int kernel_dimension = 0;
    double min_eigenvalue = 0.0;
    std::vector<double> eigenvalues;
    std::vector<double> predictions;
};
SpectrumCaseResult spectrum_case(int modes, int levels, const std::vector<double>& s,
                                 double tau2, int count);

/// Closed-form multiset {Σ_i 2 τ₂ s_i (k_i + f_i)} over interior states.
std::vector<double> closed_form_square_spectrum(int modes, int levels,
                                                const std::vector<double>& s,
                                                double tau2, int margin = 2);

/// Worst |λ_i + λ_{rev}| of the full spectrum of B (symmetry about zero).
double bott_spectrum_symmetry_defect(int modes, int levels,
                                     const std::vector<double>& s, double tau2);

/// Abelian Weyl conjugation against the analytic phase: residual of
/// U_ω⁻¹ e^X U_ω vs e^X followed by the closed-form holonomy shift, on a
/// σ₃-valued plane-wave ω (O(h²) in the lattice).
double weyl_abelian_closed_form_residual(int sites_per_axis);

/// The documented σ ≠ 0 one-particle case: commensurate translation flow and
/// a non-constant connection. Returns orthogonality defects of the
/// conjugated and plain matrices plus the sector norms of the conjugated one.
struct SigmaWeightingCase {
    double conjugated_defect = 0.0;
    double plain_defect = 0.0;
    std::vector<double> sector_norms;
};
SigmaWeightingCase documented_sigma_weighting_case(int k_max);

/// Least-squares slope of log(shell increment sum) against log(shell weight)
/// over shells whose mode indices lie in [first_index, n_max).
double commutator_shell_slope(const std::vector<double>& lambda,
                              const std::vector<double>& weight_sq,
                              const std::vector<double>& increment, int first_index);

} // namespace qhl

#endif
