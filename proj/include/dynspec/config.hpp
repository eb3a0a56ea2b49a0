#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynspec/prony.hpp"
#include "dynspec/recovery.hpp"

namespace dynspec {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SpectrumKind { random, monotone };

struct Config {
    int d = 15;
    int m = 3;
    int L = 300;
    int K = 0;  // 0 selects floor(L/2)
    double alpha = 0.05;
    double c = 5.0;
    double sigma = 0.0;
    Method method = Method::proposed;
    AssignmentMode assignment_mode = AssignmentMode::oracle;
    SpectrumKind spectrum = SpectrumKind::random;
    RecoveryParams params;
    std::optional<double> tol;          // unset: 1e-12 without noise, 1e-8 with
    std::optional<double> noise_floor;  // unset: 10 sigma sqrt(J)
    double tau_rel = 1e-8;
    std::uint64_t seed = 0;
    bool reuse_outliers = true;
    int trials = 15;
    std::vector<double> alphas{0.01, 0.03, 0.05, 0.07, 0.09, 0.11, 0.13, 0.15};
    std::vector<double> cs{1.0, 5.0};
    std::vector<double> sigmas{1e-3, 1e-5, 1e-7, 1e-9};
    int threads = 1;
    bool record_wall_time = false;

    int J() const { return d / m; }
    int lift_size() const { return K > 0 ? K : L / 2; }
};

// Defaults for the two sweeps: (21,3,7,300) with 15 trials, and (15,3,5,300) with 5 trials.
Config alpha_sweep_defaults();
Config noise_sweep_defaults();

// Throws ValidationError naming the first violated invariant.
void validate(const Config& cfg);

// Flat `key = value` text; `#` starts a comment; lists as [a, b, c].
void apply_config_text(Config& cfg, const std::string& text);
void apply_config_file(Config& cfg, const std::string& path);

// Solver parameters after noise-dependent defaults are filled in.
RecoveryParams effective_params(const Config& cfg);

}  // namespace dynspec
