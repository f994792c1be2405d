// helix: command-line front end of the induction-equation verification suite.
//
// Usage: helix <experiment> --config PATH [--seed U64] [--paths M] [--out PATH]
//
// The CSV report goes to --out (stdout by default); check results go to
// stderr.  Exit codes: 0 all checks pass, 1 at least one check failed,
// 2 configuration error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "helix/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral verification suite for the stochastic induction "
                 "equation with structured transport noise"};
    app.get_formatter()->column_width(28);

    std::string experiment, config_path, out_path;
    uint64_t seed = 0;
    int paths = 0;

    app.add_option("experiment", experiment, "One of: validate, corrector-check, "
                   "covariance, helicity, simulate, limit, dynamo, beta, "
                   "converge, b3-converge")
        ->required()
        ->check(CLI::IsMember(helix::experiment_names()));
    app.add_option("--config", config_path, "Path to a `key = value` config file")
        ->required();
    auto* seed_opt =
        app.add_option("--seed", seed, "Override base_seed from the config");
    auto* paths_opt =
        app.add_option("--paths", paths, "Override the Monte-Carlo path count M");
    app.add_option("--out", out_path, "Write the CSV report here (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad invocation is a configuration error
    }

    try {
        helix::RunConfig cfg = helix::load_config(config_path);
        if (seed_opt->count() > 0) cfg.base_seed = seed;
        if (paths_opt->count() > 0) {
            if (paths < 1) throw helix::ConfigError("--paths must be >= 1");
            cfg.M = paths;
        }

        helix::ExperimentOutput res = helix::run_experiment(experiment, cfg);

        if (out_path.empty()) {
            std::cout << res.csv;
        } else {
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw helix::ConfigError("cannot open output file '" +
                                             out_path + "'");
            f << res.csv;
        }

        for (const helix::CheckResult& c : res.checks)
            std::fprintf(stderr, "[%s] %s: %s\n", c.pass ? "PASS" : "FAIL",
                         c.name.c_str(), c.detail.c_str());
        bool ok = res.passed();
        std::fprintf(stderr, "%s: %zu check(s), %s\n", experiment.c_str(),
                     res.checks.size(), ok ? "all passed" : "FAILURES present");
        return ok ? 0 : 1;
    } catch (const helix::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
