#pragma once

#include <vector>

namespace dynspec {

struct RecoveryParams {
    int max_iters = 200;
    double tol = 1e-12;         // 1e-8 is the usual choice with Gaussian noise
    double gamma = 0.65;        // threshold decay
    double beta = 0.5;          // threshold scale
    double eta_rel = 1e-6;      // flag threshold relative to median |s(0)|
    double noise_floor = 0.0;   // absolute flag threshold, e.g. 10 sigma sqrt(J)
    double noise_std = 0.0;     // std of one channel entry, sigma sqrt(J); 0 when noiseless
    double rank_noise_factor = 3.0;  // singular values below factor * sqrt(K) * noise_std are noise
    bool exponential_fit = true;     // finish completion with a least-squares exponential fit
    bool real_roots = true;          // restrict that fit to real roots (real symmetric kernels)
    int rank0 = 0;              // 0 selects (m+1)/2
    int rankj = 0;              // 0 selects m
    bool fast_svd = true;
};

struct IterationRecord {
    int iteration = 0;
    double residual = 0.0;
    double threshold = 0.0;
    int support_size = 0;
};

}  // namespace dynspec
