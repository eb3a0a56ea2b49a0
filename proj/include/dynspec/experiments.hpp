#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "dynspec/config.hpp"
#include "dynspec/dynamics.hpp"
#include "dynspec/prony.hpp"
#include "dynspec/recovery.hpp"

namespace dynspec {

struct Instance {
    Config config;
    std::uint64_t seed = 0;        // drives spectrum, x0 and outliers
    std::uint64_t noise_seed = 0;  // drives the Gaussian noise
    Spectrum truth;
    rvec x0;
    MeasurementSet ms;
};

Instance make_instance(const Config& cfg, std::uint64_t seed, std::uint64_t noise_seed);
inline Instance make_instance(const Config& cfg, std::uint64_t seed) { return make_instance(cfg, seed, seed); }

struct ChannelDiagnostics {
    int j = 0;
    double mu = 0;     // incoherence of the true roots
    double kappa = 0;  // condition number of the clean Hankel matrix
};

struct TrialResult {
    Config config;
    Method method = Method::proposed;
    std::uint64_t seed = 0;
    double re = 0;
    double snr_spec = 0;
    double snr_outlier = 0;
    double snr_gauss = 0;
    bool failed = false;
    std::string failure;
    double wall_time_s = 0;
    rvec truth;
    SpectrumEstimate estimate;
    std::vector<int> true_support;       // restricted to {0..2K-2}
    std::vector<int> estimated_support;
    std::string detector;
    std::vector<int> channel_iterations;
    std::vector<ChannelDiagnostics> diagnostics;
};

TrialResult run_trial(const Instance& inst, Method method, bool with_diagnostics = false);
TrialResult run_trial(const Config& cfg, std::uint64_t seed);

struct SweepRow {
    double alpha = 0, c = 0, sigma = 0;
    Method method = Method::proposed;
    int trial = 0;  // -1 for aggregate rows
    std::uint64_t seed = 0;
    double re = 0, snr_spec = 0, snr_outlier = 0, snr_gauss = 0;
    double wall_time_s = 0;
    bool failed = false;
    double median_re = 0;
};

struct SpectrumRow {
    double sigma = 0;
    Method method = Method::proposed;
    int trial = 0;
    rvec truth, estimate;
};

struct SweepOutput {
    std::vector<SweepRow> trials;
    std::vector<SweepRow> aggregates;
    std::vector<SpectrumRow> spectra;  // first trial of each (sigma, method); noise sweep only
};

SweepOutput sweep_alpha(const Config& cfg);
SweepOutput sweep_noise(const Config& cfg);

void write_sweep_csv(std::ostream& os, const SweepOutput& out);
void write_spectra_csv(std::ostream& os, const SweepOutput& out);

// Runs fn(i) for i in [0, n) on `threads` workers; fn must only touch slot i of its output.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace dynspec
