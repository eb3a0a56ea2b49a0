#include "dynspec/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dynspec {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        return s.substr(1, s.size() - 2);
    return s;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ValidationError(key + " must be a number, got '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ValidationError(key + " must be an integer, got '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size() || (!v.empty() && v[0] == '-')) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ValidationError(key + " must be a nonnegative integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ValidationError(key + " must be true or false");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ValidationError(key + " must be a list like [a, b]");
    std::vector<double> out;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    if (out.empty()) throw ValidationError(key + " must not be empty");
    return out;
}

void set_key(Config& cfg, const std::string& key, const std::string& raw) {
    const std::string v = unquote(raw);
    if (key == "d") cfg.d = int(to_int(key, v));
    else if (key == "m") cfg.m = int(to_int(key, v));
    else if (key == "L") cfg.L = int(to_int(key, v));
    else if (key == "K") cfg.K = int(to_int(key, v));
    else if (key == "alpha") cfg.alpha = to_double(key, v);
    else if (key == "c") cfg.c = to_double(key, v);
    else if (key == "sigma") cfg.sigma = to_double(key, v);
    else if (key == "method") {
        try { cfg.method = parse_method(v); } catch (const std::invalid_argument& e) { throw ValidationError(e.what()); }
    } else if (key == "assignment_mode") {
        try { cfg.assignment_mode = parse_assignment_mode(v); } catch (const std::invalid_argument& e) { throw ValidationError(e.what()); }
    } else if (key == "spectrum") {
        if (v == "random") cfg.spectrum = SpectrumKind::random;
        else if (v == "monotone") cfg.spectrum = SpectrumKind::monotone;
        else throw ValidationError("spectrum must be random or monotone");
    }
    else if (key == "max_iters") cfg.params.max_iters = int(to_int(key, v));
    else if (key == "tol") cfg.tol = to_double(key, v);
    else if (key == "gamma") cfg.params.gamma = to_double(key, v);
    else if (key == "beta") cfg.params.beta = to_double(key, v);
    else if (key == "eta_rel") cfg.params.eta_rel = to_double(key, v);
    else if (key == "noise_floor") cfg.noise_floor = to_double(key, v);
    else if (key == "tau_rel") cfg.tau_rel = to_double(key, v);
    else if (key == "fast_svd") cfg.params.fast_svd = to_bool(key, v);
    else if (key == "exponential_fit") cfg.params.exponential_fit = to_bool(key, v);
    else if (key == "real_roots") cfg.params.real_roots = to_bool(key, v);
    else if (key == "rank_noise_factor") cfg.params.rank_noise_factor = to_double(key, v);
    else if (key == "seed") cfg.seed = to_u64(key, v);
    else if (key == "reuse_outliers") cfg.reuse_outliers = to_bool(key, v);
    else if (key == "trials") cfg.trials = int(to_int(key, v));
    else if (key == "alphas") cfg.alphas = to_list(key, v);
    else if (key == "cs") cfg.cs = to_list(key, v);
    else if (key == "sigmas") cfg.sigmas = to_list(key, v);
    else if (key == "threads") cfg.threads = int(to_int(key, v));
    else if (key == "record_wall_time") cfg.record_wall_time = to_bool(key, v);
    else throw ValidationError("unknown config key '" + key + "'");
}

}  // namespace

Config alpha_sweep_defaults() {
    Config cfg;
    cfg.d = 21;
    cfg.m = 3;
    cfg.L = 300;
    cfg.trials = 15;
    return cfg;
}

Config noise_sweep_defaults() {
    Config cfg;
    cfg.d = 15;
    cfg.m = 3;
    cfg.L = 300;
    cfg.alpha = 0.05;
    cfg.trials = 5;
    return cfg;
}

void validate(const Config& cfg) {
    if (cfg.d < 3 || cfg.d % 2 == 0) throw ValidationError("d must be odd");
    if (cfg.m < 1 || cfg.d % cfg.m != 0) throw ValidationError("m must divide d");
    if (cfg.m % 2 == 0) throw ValidationError("m must be odd");
    if (cfg.L < 2) throw ValidationError("L must be at least 2");
    if (cfg.K < 0) throw ValidationError("K must be nonnegative");
    if (2 * cfg.lift_size() > cfg.L) throw ValidationError("2K must not exceed L");
    if (cfg.lift_size() <= (cfg.m + 1)) throw ValidationError("K must exceed m + 1");
    auto check_alpha = [](double a) {
        if (!(a >= 0.0 && a < 1.0)) throw ValidationError("alpha must lie in [0,1)");
    };
    check_alpha(cfg.alpha);
    for (double a : cfg.alphas) check_alpha(a);
    if (!(cfg.c > 0)) throw ValidationError("c must be positive");
    for (double c : cfg.cs)
        if (!(c > 0)) throw ValidationError("c must be positive");
    if (!(cfg.sigma >= 0)) throw ValidationError("sigma must be nonnegative");
    for (double s : cfg.sigmas)
        if (!(s >= 0)) throw ValidationError("sigma must be nonnegative");
    if (cfg.params.max_iters < 1) throw ValidationError("max_iters must be positive");
    if (cfg.tol && !(*cfg.tol > 0)) throw ValidationError("tol must be positive");
    if (!(cfg.params.gamma > 0 && cfg.params.gamma < 1)) throw ValidationError("gamma must lie in (0,1)");
    if (!(cfg.params.beta > 0)) throw ValidationError("beta must be positive");
    if (!(cfg.params.eta_rel > 0)) throw ValidationError("eta_rel must be positive");
    if (cfg.noise_floor && !(*cfg.noise_floor >= 0)) throw ValidationError("noise_floor must be nonnegative");
    if (!(cfg.tau_rel > 0 && cfg.tau_rel < 1)) throw ValidationError("tau_rel must lie in (0,1)");
    if (cfg.trials < 1) throw ValidationError("trials must be positive");
    if (cfg.threads < 1) throw ValidationError("threads must be positive");
    if (cfg.assignment_mode == AssignmentMode::sorted && cfg.spectrum != SpectrumKind::monotone)
        throw ValidationError("sorted assignment requires spectrum = monotone");
}

void apply_config_text(Config& cfg, const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;  // blank or [section] header
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void apply_config_file(Config& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    apply_config_text(cfg, buf.str());
}

RecoveryParams effective_params(const Config& cfg) {
    RecoveryParams p = cfg.params;
    p.tol = cfg.tol ? *cfg.tol : (cfg.sigma > 0 ? 1e-8 : 1e-12);
    p.noise_std = cfg.sigma * std::sqrt(double(cfg.J()));
    p.noise_floor = cfg.noise_floor ? *cfg.noise_floor : 10.0 * p.noise_std;
    return p;
}

}  // namespace dynspec
