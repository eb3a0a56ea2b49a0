#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dynspec/completion.hpp"
#include "dynspec/detection.hpp"
#include "dynspec/hankel.hpp"
#include "dynspec/recovery_types.hpp"

namespace dynspec {

enum class Method { proposed, cadzow };

Method parse_method(const std::string& s);
std::string to_string(Method m);

struct CadzowResult {
    cvec sequence;
    int iterations = 0;
    bool converged = false;
    std::vector<IterationRecord> log;
};

// Alternating rank-r truncation and anti-diagonal averaging of lift(seq).
CadzowResult cadzow_denoise(const cvec& seq, int K, int r, int iters, double tol, bool fast_svd = true);

struct RecoveryOutput {
    std::vector<HankelChannel> cleaned;
    std::vector<int> estimated_support;
    cvec sparse_component;           // anti-diagonals of Ohat (proposed only)
    std::vector<IterationRecord> iteration_log;
    std::vector<int> channel_iterations;
    bool converged = true;
    std::string detector;
};

RecoveryOutput recover_all_channels(const std::vector<HankelChannel>& channels, int m, const RecoveryParams& params,
                                    Method method);

void write_iteration_log_csv(std::ostream& os, const std::vector<IterationRecord>& log);

}  // namespace dynspec
