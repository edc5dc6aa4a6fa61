#include "qhl/config.hpp"
#include "qhl/report.hpp"
#include "qhl/suites.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"qhl: truncated quantum-holonomy verification suites"};
    std::string config_path;
    std::string out_override;
    std::string suite = "all";
    double tolerance_scale = 0.0;

    app.add_option("--config", config_path, "configuration file (INI-style sections)");
    app.add_option("--out", out_override, "output directory override");
    app.add_option("--suite", suite,
                   "suite: spectrum | holonomy | sobolev | ccr | continuity | fock | "
                   "commutator-profile | all");
    app.add_option("--tolerance-scale", tolerance_scale,
                   "multiply every tolerance by this factor");

    // subcommand aliases for the suite names
    for (const char* name : {"spectrum", "holonomy", "sobolev", "ccr", "continuity",
                             "fock", "commutator-profile", "all"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " suite");
        sub->callback([&suite, name]() { suite = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        qhl::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = qhl::load_config(config_path);
        if (tolerance_scale > 0.0) cfg.tolerance_scale = tolerance_scale;
        std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;

        auto reports = qhl::run_named_suite(suite, cfg, out_dir);

        bool all_pass = true;
        for (const auto& rep : reports) {
            for (const auto& c : rep.checks) {
                std::printf("[%s] %-4s %s | %s | residual %.3e tolerance %.3e\n",
                            rep.name.c_str(), c.pass ? "PASS" : "FAIL",
                            c.operation.c_str(), c.parameters.c_str(), c.residual,
                            c.tolerance);
            }
            std::printf("[%s] suite %s\n", rep.name.c_str(),
                        rep.all_pass() ? "PASS" : "FAIL");
            all_pass = all_pass && rep.all_pass();
        }
        std::printf("summary: %s (reports in %s)\n", all_pass ? "PASS" : "FAIL",
                    out_dir.c_str());
        return all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
