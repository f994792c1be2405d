// Tests for the run-configuration parser, CSV emission, and the experiment
// drivers on deliberately tiny configurations: every driver must produce a
// deterministic CSV with the resolved config as leading metadata, named
// checks that pass on healthy inputs, and ConfigError on misuse.
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "helix/csv.hpp"
#include "helix/harness.hpp"

using namespace helix;

namespace {

bool config_error_contains(const std::string& text, const std::string& part) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return std::string(e.what()).find(part) != std::string::npos;
    }
    return false;
}

bool run_error_contains(const std::string& name, const RunConfig& cfg,
                        const std::string& part) {
    try {
        (void)run_experiment(name, cfg);
    } catch (const ConfigError& e) {
        return std::string(e.what()).find(part) != std::string::npos;
    }
    return false;
}

void check_all_pass(const ExperimentOutput& out) {
    for (const CheckResult& c : out.checks) {
        INFO("check '", c.name, "': ", c.detail);
        CHECK(c.pass);
    }
    CHECK(out.passed());
}

const char* kHelicalText =
    "regime = helical\n"
    "alpha = 2\n"
    "beta = 4\n"
    "gamma = 6\n"
    "c1h = 3\n"
    "c2h = 1\n"
    "cv = 3\n"
    "rho = 1\n"
    "eta = 0.5\n"
    "n = 2\n";

const char* kSimulateText =
    "regime = isotropic\n"
    "alpha = 3\n"
    "beta = 3\n"
    "gamma = 3\n"
    "c1h = 6\n"
    "c2h = 6\n"
    "cv = 6\n"
    "rho = 0.5\n"
    "eta = 1\n"
    "n = 1\n"
    "lambda = 1\n"
    "dt = 0.001\n"
    "T = 0.02\n"
    "record_every = 5\n";

const char* kDynamoText =
    "regime = helical\n"
    "alpha = 2\n"
    "beta = 4\n"
    "gamma = 6\n"
    "c1h = 3\n"
    "c2h = 1\n"
    "cv = 3\n"
    "rho = 1\n"
    "eta = 0.5\n"
    "n = 1\n"
    "lambda = 1\n"
    "dt = 0.001\n"
    "T = 0.05\n"
    "record_every = 10\n"
    "M = 5\n"
    "base_seed = 777\n"
    "epsilon = 0.5\n";

const char* kBetaText =
    "regime = isotropic\n"
    "alpha = 3\n"
    "beta = 3\n"
    "gamma = 3\n"
    "c1h = 3\n"
    "c2h = 3\n"
    "cv = 3\n"
    "rho = 0\n"
    "eta = 1\n"
    "n = 2\n"
    "lambda = 1\n"
    "theta = 1\n"
    "dt = 0.01\n"
    "T = 0.2\n"
    "record_every = 2\n"
    "M = 8\n"
    "base_seed = 555\n";

const char* kConvergeText =
    "regime = isotropic\n"
    "alpha = 3\n"
    "beta = 3\n"
    "gamma = 3\n"
    "c1h = 25\n"
    "c2h = 25\n"
    "cv = 25\n"
    "rho = 0.5\n"
    "eta = 1\n"
    "n_list = 1,2\n"
    "lambda = 1\n"
    "theta = 1\n"
    "delta = 0.25\n"
    "kappa = 1\n"
    "dt = 0.01\n"
    "T = 0.1\n"
    "record_every = 2\n"
    "M = 8\n"
    "base_seed = 321\n";

const char* kB3Text =
    "regime = perturbed2d\n"
    "alpha = 2\n"
    "beta = 4\n"
    "gamma = 5\n"
    "c1h = 24\n"
    "c2h = 6\n"
    "cv = 6\n"
    "rho = 0.7\n"
    "eta = 1\n"
    "n_list = 1,2\n"
    "theta = 1\n"
    "delta = 0.25\n"
    "kappa = 1\n"
    "vartheta = 1.5\n"
    "dt = 0.01\n"
    "T = 0.1\n"
    "record_every = 2\n"
    "M = 8\n"
    "base_seed = 321\n";

}  // namespace

TEST_CASE("parse_config: defaults and a full 23-key round trip") {
    RunConfig d = parse_config("");
    CHECK(d.params.regime == Regime::Isotropic);
    CHECK(d.params.alpha == 3.0);
    CHECK(d.params.c1h == 3.0);
    CHECK(d.params.rho == 0.0);
    CHECK(d.params.eta == 1.0);
    CHECK(d.params.n == 1);
    CHECK(d.n_list.empty());
    CHECK(d.lambda == 1);
    CHECK(d.theta == 1.0);
    CHECK(d.delta == 0.25);
    CHECK(d.kappa == 1.0);
    CHECK(d.vartheta == 1.5);
    CHECK(d.dt == 1e-3);
    CHECK(d.T == 1.0);
    CHECK(d.K_max == 0);
    CHECK(d.M == 100);
    CHECK(d.base_seed == 12345);
    CHECK(d.record_every == 10);
    CHECK(d.epsilon == 0.5);

    const std::string full =
        "# full configuration, every documented key once\n"
        "regime = perturbed2d\n"
        "\n"
        "alpha = 2\n"
        "beta = 4\n"
        "gamma = 5.5\n"
        "c1h = 24\n"
        "c2h = 6\n"
        "cv = 6.25\n"
        "rho = -0.7\n"
        "eta = 0.5\n"
        "n = 3\n"
        "n_list = 2, 4, 8\n"
        "lambda = 2\n"
        "theta = 0.8\n"
        "delta = 0.2\n"
        "kappa = 1.5\n"
        "vartheta = 1.25\n"
        "dt = 0.002\n"
        "T = 0.75\n"
        "K_max = 11\n"
        "M = 40\n"
        "base_seed = 18446744073709551615\n"
        "record_every = 4\n"
        "epsilon = 0.25\n";
    RunConfig c = parse_config(full);
    CHECK(c.params.regime == Regime::Perturbed2D);
    CHECK(c.params.alpha == 2.0);
    CHECK(c.params.beta == 4.0);
    CHECK(c.params.gamma == 5.5);
    CHECK(c.params.c1h == 24.0);
    CHECK(c.params.c2h == 6.0);
    CHECK(c.params.cv == 6.25);
    CHECK(c.params.rho == -0.7);
    CHECK(c.params.eta == 0.5);
    CHECK(c.params.n == 3);
    CHECK(c.n_list == std::vector<int>{2, 4, 8});
    CHECK(c.lambda == 2);
    CHECK(c.theta == 0.8);
    CHECK(c.delta == 0.2);
    CHECK(c.kappa == 1.5);
    CHECK(c.vartheta == 1.25);
    CHECK(c.dt == 0.002);
    CHECK(c.T == 0.75);
    CHECK(c.K_max == 11);
    CHECK(c.M == 40);
    CHECK(c.base_seed == 18446744073709551615ULL);
    CHECK(c.record_every == 4);
    CHECK(c.epsilon == 0.25);
}

TEST_CASE("parse_config: malformed lines and unknown keys are hard errors") {
    CHECK(config_error_contains("regime is helical\n", "expected 'key = value'"));
    CHECK(config_error_contains("= 3\n", "missing key"));
    CHECK(config_error_contains("eta =\n", "missing value"));
    CHECK(config_error_contains("eta = 1\neta = 2\n", "duplicate key 'eta'"));
    CHECK(config_error_contains("viscosity = 1\n", "unknown key 'viscosity'"));
    CHECK(config_error_contains("alpha = abc\n", "cannot parse"));
    CHECK(config_error_contains("n = 3x\n", "trailing characters"));
    CHECK(config_error_contains("regime = spiral\n", "regime"));
    // Line numbers are reported for localized errors.
    CHECK(config_error_contains("eta = 1\nbogus = 2\n", "config line 2"));
}

TEST_CASE("parse_config: range checks on scalars and n_list") {
    CHECK(config_error_contains("n = 0\n", "n must be >= 1"));
    CHECK(config_error_contains("lambda = 0\n", "lambda must be >= 1"));
    CHECK(config_error_contains("M = 0\n", "M must be >= 1"));
    CHECK(config_error_contains("K_max = -1\n", "K_max must be >= 0"));
    CHECK(config_error_contains("record_every = -1\n", "record_every must be >= 0"));
    CHECK(config_error_contains("n_list = 2,1\n", "strictly ascending"));
    CHECK(config_error_contains("n_list = 0\n", "entries must be >= 1"));
    CHECK(config_error_contains("n_list = 2,,4\n", "empty entry"));

    CHECK(config_error_contains("theta = 2.5\n", "theta must lie in (0, 2)"));
    CHECK(config_error_contains("theta = 0\n", "theta must lie in (0, 2)"));
    CHECK(config_error_contains("delta = 1.5\n", "delta must lie in (0, theta)"));
    CHECK(config_error_contains("kappa = 2\n", "kappa must lie in [1, 2)"));
    CHECK(config_error_contains("kappa = 0.5\n", "kappa must lie in [1, 2)"));
    CHECK(config_error_contains("vartheta = 0.5\n", "vartheta must lie in (theta, 3/2]"));
    CHECK(config_error_contains("vartheta = 1.6\n", "vartheta must lie in (theta, 3/2]"));
    CHECK(config_error_contains("dt = 0\n", "dt must be positive"));
    CHECK(config_error_contains("T = -1\n", "T must be positive"));
    CHECK(config_error_contains("epsilon = 1\n", "epsilon must lie in (0, 1)"));
}

TEST_CASE("load_config: file round trip and missing files") {
    CHECK_THROWS_AS((void)load_config("/nonexistent/helix.cfg"), ConfigError);
    try {
        (void)load_config("/nonexistent/helix.cfg");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("cannot open config file") != std::string::npos);
    }

    const std::string path = "/tmp/helix_unit_harness_roundtrip.cfg";
    {
        std::ofstream out(path, std::ios::binary);
        out << kDynamoText;
    }
    RunConfig from_file = load_config(path);
    RunConfig from_text = parse_config(kDynamoText);
    CHECK(describe(from_file) == describe(from_text));
    std::remove(path.c_str());
}

TEST_CASE("describe: deterministic resolved-config line") {
    RunConfig cfg = parse_config(kConvergeText);
    std::string s = describe(cfg);
    CHECK(s.rfind("regime=isotropic", 0) == 0);
    CHECK(s.find(" n_list=1,2") != std::string::npos);
    CHECK(s.find(" base_seed=321") != std::string::npos);
    CHECK(s.find(" dt=0.01") != std::string::npos);
    CHECK(describe(cfg) == s);
    // Without n_list the field is omitted entirely.
    CHECK(describe(parse_config("")).find("n_list") == std::string::npos);
}

TEST_CASE("csv_num and CsvWriter: exact numbers and RFC 4180 quoting") {
    CHECK(csv_num(1.0) == "1");
    CHECK(csv_num(0.1) == "0.10000000000000001");
    CHECK(csv_num(-2.5) == "-2.5");
    CHECK(csv_num(42) == "42");
    CHECK(csv_num(uint64_t(18446744073709551615ULL)) == "18446744073709551615");

    std::ostringstream os;
    CsvWriter w(os);
    w.comment("meta line");
    w.row({"plain", "with,comma", "with\"quote", "with\nnewline"});
    CHECK(os.str() ==
          "# meta line\n"
          "plain,\"with,comma\",\"with\"\"quote\",\"with\nnewline\"\n");
}

TEST_CASE("experiment_names: canonical list; dispatch rejects unknown names") {
    const std::vector<std::string> want{
        "validate", "corrector-check", "covariance", "helicity", "simulate",
        "limit",    "dynamo",          "beta",       "converge", "b3-converge"};
    CHECK(experiment_names() == want);
    CHECK(run_error_contains("frobnicate", parse_config(""),
                             "unknown experiment 'frobnicate'"));
}

TEST_CASE("run_experiment: regime and shape misuse raise ConfigError") {
    RunConfig iso = parse_config(kBetaText);
    CHECK(run_error_contains("dynamo", iso,
                             "dynamo requires the helical or perturbed2d regime"));
    RunConfig hel = parse_config(kDynamoText);
    CHECK(run_error_contains("beta", hel, "beta requires the isotropic regime"));

    RunConfig conv = parse_config(kConvergeText);
    RunConfig conv_kmax = conv;
    conv_kmax.K_max = 4;
    CHECK(run_error_contains("converge", conv_kmax,
                             "resolves K_max per level; set K_max = 0"));
    RunConfig conv_short = conv;
    conv_short.n_list = {4};
    CHECK(run_error_contains("converge", conv_short,
                             "requires n_list with at least two entries"));
    CHECK(run_error_contains("b3-converge", conv,
                             "b3-converge requires the perturbed2d regime"));

    // Stochastic drivers reject inadmissible regime parameters outright.
    RunConfig weak = parse_config(kDynamoText);
    weak.params.c1h = 1.0;
    CHECK(run_error_contains("dynamo", weak,
                             "regime parameters violate admissibility"));
}

TEST_CASE("run_validate: pass and itemized failure") {
    RunConfig good = parse_config(kHelicalText);
    ExperimentOutput ok = run_validate(good);
    check_all_pass(ok);
    CHECK(ok.csv.rfind("# regime=helical", 0) == 0);
    CHECK(ok.csv.find("regime_admissibility,pass") != std::string::npos);

    RunConfig bad = good;
    bad.params.beta = 3.5;  // breaks alpha + beta = 6
    ExperimentOutput fail = run_validate(bad);
    CHECK_FALSE(fail.passed());
    bool itemized = false;
    for (const CheckResult& c : fail.checks)
        if (c.name == "constraint" && !c.pass) itemized = true;
    CHECK(itemized);
}

TEST_CASE("run_corrector_check: tiny randomized comparison passes") {
    RunConfig cfg = parse_config(kHelicalText);
    cfg.params.n = 1;
    cfg.M = 3;
    ExperimentOutput out = run_corrector_check(cfg);
    check_all_pass(out);
    CHECK(out.csv.rfind("# regime=", 0) == 0);
    bool found = false;
    for (const CheckResult& c : out.checks)
        if (c.name == "max_rel_error") found = c.pass;
    CHECK(found);
}

TEST_CASE("run_covariance: per-level checks and byte-identical reruns") {
    RunConfig cfg = parse_config(kConvergeText);
    ExperimentOutput a = run_covariance(cfg);
    check_all_pass(a);
    bool n1 = false, n2 = false, q1 = false;
    for (const CheckResult& c : a.checks) {
        if (c.name == "eta_closed_vs_direct[n=1]") n1 = true;
        if (c.name == "eta_closed_vs_direct[n=2]") n2 = true;
        if (c.name == "qrho_zero[n=1]") q1 = true;
    }
    CHECK(n1);
    CHECK(n2);
    CHECK(q1);
    ExperimentOutput b = run_covariance(cfg);
    CHECK(a.csv == b.csv);
}

TEST_CASE("run_helicity: closed form, direct sum, and limit order") {
    RunConfig cfg = parse_config(kHelicalText);
    cfg.n_list = {1, 2, 4};
    ExperimentOutput out = run_helicity(cfg);
    check_all_pass(out);
    bool order = false;
    for (const CheckResult& c : out.checks)
        if (c.name == "limit_order") order = true;
    CHECK(order);
}

TEST_CASE("run_simulate: single path, structural checks, determinism") {
    RunConfig cfg = parse_config(kSimulateText);
    ExperimentOutput a = run_simulate(cfg);
    check_all_pass(a);
    CHECK(a.csv.rfind("# regime=isotropic", 0) == 0);
    bool div = false, fin = false, loss = false;
    for (const CheckResult& c : a.checks) {
        if (c.name == "divergence_free") div = true;
        if (c.name == "finite_observables") fin = true;
        if (c.name == "truncation_loss") loss = true;
    }
    CHECK(div);
    CHECK(fin);
    CHECK(loss);
    ExperimentOutput b = run_simulate(cfg);
    CHECK(a.csv == b.csv);
}

TEST_CASE("run_limit: mean-field trajectory with the exact rate in metadata") {
    RunConfig cfg = parse_config(kSimulateText);
    ExperimentOutput out = run_limit(cfg);
    check_all_pass(out);
    CHECK(out.csv.find("exact decay rate of B0 = ") != std::string::npos);
    ExperimentOutput again = run_limit(cfg);
    CHECK(out.csv == again.csv);
}

TEST_CASE("run_dynamo: tiny Monte-Carlo run against the exact growth law") {
    RunConfig cfg = parse_config(kDynamoText);
    ExperimentOutput a = run_dynamo(cfg);
    check_all_pass(a);
    bool band = false, cond = false;
    for (const CheckResult& c : a.checks) {
        if (c.name == "mean_within_3se") band = true;
        if (c.name == "dynamo_condition") cond = true;
    }
    CHECK(band);
    CHECK(cond);
    ExperimentOutput b = run_dynamo(cfg);
    CHECK(a.csv == b.csv);
}

TEST_CASE("run_beta: canonical rho sweep of limit rates plus SPDE decay") {
    RunConfig cfg = parse_config(kBetaText);
    ExperimentOutput out = run_beta(cfg);
    check_all_pass(out);
    int limit_rates = 0;
    bool spde = false;
    for (const CheckResult& c : out.checks) {
        if (c.name.rfind("limit_rate[", 0) == 0) ++limit_rates;
        if (c.name == "spde_rate_within_15pct") spde = true;
    }
    CHECK(limit_rates == 5);
    CHECK(spde);
}

TEST_CASE("run_converge: two-level scaling study passes at desk scale") {
    RunConfig cfg = parse_config(kConvergeText);
    ExperimentOutput out = run_converge(cfg);
    check_all_pass(out);
    bool monotone = false, order = false;
    for (const CheckResult& c : out.checks) {
        if (c.name == "sup_monotone") monotone = true;
        if (c.name == "order_positive") order = true;
    }
    CHECK(monotone);
    CHECK(order);
}

TEST_CASE("run_b3_converge: vertical-component study on the 2d datum") {
    RunConfig cfg = parse_config(kB3Text);
    ExperimentOutput out = run_b3_converge(cfg);
    check_all_pass(out);
    CHECK(out.csv.rfind("# regime=perturbed2d", 0) == 0);
    ExperimentOutput again = run_b3_converge(cfg);
    CHECK(out.csv == again.csv);
}
