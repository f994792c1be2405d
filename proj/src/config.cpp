// Parser and pretty-printer for the flat run configuration.

#include "helix/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace helix {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(int line, const std::string& key, const std::string& v) {
    size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        fail(line, key + ": cannot parse '" + v + "' as a number");
    }
    if (pos != v.size()) fail(line, key + ": trailing characters in '" + v + "'");
    return x;
}

long long parse_int(int line, const std::string& key, const std::string& v) {
    size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        fail(line, key + ": cannot parse '" + v + "' as an integer");
    }
    if (pos != v.size()) fail(line, key + ": trailing characters in '" + v + "'");
    return x;
}

uint64_t parse_u64(int line, const std::string& key, const std::string& v) {
    size_t pos = 0;
    unsigned long long x = 0;
    try {
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        fail(line, key + ": cannot parse '" + v + "' as an unsigned integer");
    }
    if (pos != v.size()) fail(line, key + ": trailing characters in '" + v + "'");
    return static_cast<uint64_t>(x);
}

std::vector<int> parse_n_list(int line, const std::string& v) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(line, "n_list: empty entry");
        long long n = parse_int(line, "n_list", item);
        if (n < 1) fail(line, "n_list: entries must be >= 1");
        if (!out.empty() && n <= out.back())
            fail(line, "n_list: entries must be strictly ascending");
        out.push_back(static_cast<int>(n));
    }
    if (out.empty()) fail(line, "n_list: no entries");
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "missing key before '='");
        if (val.empty()) fail(line, key + ": missing value");
        if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");

        if (key == "regime") {
            try {
                cfg.params.regime = regime_from_string(val);
            } catch (const std::exception& e) {
                fail(line, e.what());
            }
        } else if (key == "alpha") {
            cfg.params.alpha = parse_double(line, key, val);
        } else if (key == "beta") {
            cfg.params.beta = parse_double(line, key, val);
        } else if (key == "gamma") {
            cfg.params.gamma = parse_double(line, key, val);
        } else if (key == "c1h") {
            cfg.params.c1h = parse_double(line, key, val);
        } else if (key == "c2h") {
            cfg.params.c2h = parse_double(line, key, val);
        } else if (key == "cv") {
            cfg.params.cv = parse_double(line, key, val);
        } else if (key == "rho") {
            cfg.params.rho = parse_double(line, key, val);
        } else if (key == "eta") {
            cfg.params.eta = parse_double(line, key, val);
        } else if (key == "n") {
            long long n = parse_int(line, key, val);
            if (n < 1) fail(line, "n must be >= 1");
            cfg.params.n = static_cast<int>(n);
        } else if (key == "n_list") {
            cfg.n_list = parse_n_list(line, val);
        } else if (key == "lambda") {
            long long l = parse_int(line, key, val);
            if (l < 1) fail(line, "lambda must be >= 1");
            cfg.lambda = static_cast<int>(l);
        } else if (key == "theta") {
            cfg.theta = parse_double(line, key, val);
        } else if (key == "delta") {
            cfg.delta = parse_double(line, key, val);
        } else if (key == "kappa") {
            cfg.kappa = parse_double(line, key, val);
        } else if (key == "vartheta") {
            cfg.vartheta = parse_double(line, key, val);
        } else if (key == "dt") {
            cfg.dt = parse_double(line, key, val);
        } else if (key == "T") {
            cfg.T = parse_double(line, key, val);
        } else if (key == "K_max") {
            long long k = parse_int(line, key, val);
            if (k < 0) fail(line, "K_max must be >= 0");
            cfg.K_max = static_cast<int>(k);
        } else if (key == "M") {
            long long m = parse_int(line, key, val);
            if (m < 1) fail(line, "M must be >= 1");
            cfg.M = static_cast<int>(m);
        } else if (key == "base_seed") {
            cfg.base_seed = parse_u64(line, key, val);
        } else if (key == "record_every") {
            long long r = parse_int(line, key, val);
            if (r < 0) fail(line, "record_every must be >= 0");
            cfg.record_every = static_cast<int>(r);
        } else if (key == "epsilon") {
            cfg.epsilon = parse_double(line, key, val);
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }

    // Cross-field invariants of the exponent bookkeeping.
    if (!(cfg.theta > 0.0 && cfg.theta < 2.0))
        throw ConfigError("theta must lie in (0, 2)");
    if (!(cfg.delta > 0.0 && cfg.delta < cfg.theta))
        throw ConfigError("delta must lie in (0, theta)");
    if (!(cfg.kappa >= 1.0 && cfg.kappa < 2.0))
        throw ConfigError("kappa must lie in [1, 2)");
    if (!(cfg.vartheta > cfg.theta && cfg.vartheta <= 1.5))
        throw ConfigError("vartheta must lie in (theta, 3/2]");
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(cfg.T > 0.0)) throw ConfigError("T must be positive");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
        throw ConfigError("epsilon must lie in (0, 1)");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string describe(const RunConfig& cfg) {
    std::string s;
    s += "regime=";
    s += regime_name(cfg.params.regime);
    s += " alpha=" + fmt(cfg.params.alpha);
    s += " beta=" + fmt(cfg.params.beta);
    s += " gamma=" + fmt(cfg.params.gamma);
    s += " c1h=" + fmt(cfg.params.c1h);
    s += " c2h=" + fmt(cfg.params.c2h);
    s += " cv=" + fmt(cfg.params.cv);
    s += " rho=" + fmt(cfg.params.rho);
    s += " eta=" + fmt(cfg.params.eta);
    s += " n=" + std::to_string(cfg.params.n);
    if (!cfg.n_list.empty()) {
        s += " n_list=";
        for (size_t i = 0; i < cfg.n_list.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(cfg.n_list[i]);
        }
    }
    s += " lambda=" + std::to_string(cfg.lambda);
    s += " theta=" + fmt(cfg.theta);
    s += " delta=" + fmt(cfg.delta);
    s += " kappa=" + fmt(cfg.kappa);
    s += " vartheta=" + fmt(cfg.vartheta);
    s += " dt=" + fmt(cfg.dt);
    s += " T=" + fmt(cfg.T);
    s += " K_max=" + std::to_string(cfg.K_max);
    s += " M=" + std::to_string(cfg.M);
    s += " base_seed=" + std::to_string(cfg.base_seed);
    s += " record_every=" + std::to_string(cfg.record_every);
    s += " epsilon=" + fmt(cfg.epsilon);
    return s;
}

}  // namespace helix
