#pragma once

#include <string>
#include <vector>

#include "dynspec/cyclic.hpp"
#include "dynspec/recovery_types.hpp"

namespace dynspec {

struct DetectionResult {
    cvec lowrank;               // anti-diagonals of H0hat
    cvec sparse;                // anti-diagonals of Ohat
    std::vector<int> support;   // Omega_hat, sorted
    bool converged = false;     // the chosen support explains every observed entry to the flag floor
    int iterations = 0;         // alternating-projection iterations
    std::string source;         // which proposal the support came from
    double max_residual = 0;    // largest |s - model| outside the support
    std::vector<IterationRecord> log;
};

// Entries whose deviation from the low-rank model exceeds this are outliers.
double flag_floor(const cvec& seq, const RecoveryParams& params);

// Reference-channel outlier detection on the first 2K-1 entries of seq0.
DetectionResult detect_outliers(const cvec& seq0, int K, int r, const RecoveryParams& params);

// Individual stages, exposed for testing.
std::vector<int> alternating_projection_support(const cvec& seq, int K, int r, const RecoveryParams& params,
                                                double floor, std::vector<IterationRecord>* log,
                                                int* iterations = nullptr);
std::vector<int> consensus_support(const cvec& seq, int r, double floor);

struct RefinedSupport {
    std::vector<int> support;
    bool consistent = false;
    double max_residual = 0;
    cvec model;
};
RefinedSupport refine_support(const cvec& seq, int K, int r, std::vector<int> support, double floor,
                              const RecoveryParams& params, int max_rounds = 40);

}  // namespace dynspec
