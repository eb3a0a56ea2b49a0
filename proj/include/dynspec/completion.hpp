#pragma once

#include <vector>

#include "dynspec/cyclic.hpp"
#include "dynspec/recovery_types.hpp"

namespace dynspec {

// Joint least-squares fit of a monic order-r linear recurrence
//   s_{k+r} + sum_{i<r} c_i s_{k+i} = 0
// and of the unknown entries s_p, p in `missing`. The system is bilinear in
// (c, s_missing) and is solved by damped Gauss-Newton, started from the
// recurrence fitted on rows that touch no missing entry.
struct AnnihilatorFit {
    cvec coeffs;           // c_0 .. c_{r-1}
    cvec filled;           // input with missing entries imputed
    double residual = 0;   // ||recurrence residual|| / ||observed||
    int iterations = 0;
};

AnnihilatorFit fit_annihilator(const cvec& seq, const std::vector<int>& missing, int r, int max_iters = 50);

// Sequence of length seq.size() that obeys the recurrence `coeffs` exactly and is
// the least-squares match to seq on the entries outside `missing`.
cvec recurrence_model(const cvec& coeffs, const cvec& seq, const std::vector<int>& missing);

// Least-squares fit of s_l = sum_t a_t lambda_t^l to the entries outside `missing`,
// by damped Gauss-Newton on (lambda, a) from the given starting roots. A sum of r
// exponentials is exactly a rank-r Hankel sequence, so this is the low-rank Hankel
// fit to the observed entries. With real_roots the lambda_t stay on the real line
// (amplitudes stay complex).
struct ExponentialFit {
    std::vector<cplx> roots;
    cvec amplitudes;
    cvec model;            // fitted sequence, all entries
    double rms = 0;        // root-mean-square residual on observed entries
    int iterations = 0;
};

ExponentialFit fit_exponentials(const cvec& seq, const std::vector<int>& missing, const std::vector<cplx>& roots0,
                                bool real_roots = false, int max_iters = 100);

// Roots from the shift invariance of the rank-r left singular subspace of lift(seq).
std::vector<cplx> subspace_roots(const cvec& seq, int K, int r);

// Best of several exponential fits, started from the roots of fit.coeffs, from
// subspace_roots(fit.filled) and from the real parts of either. With real_roots,
// when none of these reaches the noise level, the model is also grown one root
// at a time from a coarse grid of real starting points.
ExponentialFit fit_low_rank_model(const cvec& seq, const std::vector<int>& missing, int K, const AnnihilatorFit& fit,
                                  bool real_roots = false, double noise_std = 0.0);

// Noise-aware rank: singular values of lift(seq) above max(tau_rel sigma_1, factor sqrt(K) noise_std),
// clamped to [1, r_max].
int noise_rank(const cvec& seq, int K, int r_max, double noise_std, double factor, double tau_rel = 1e-8);

struct CompletionResult {
    cvec sequence;   // anti-diagonals of the rank-r Hankel estimate
    cvec coeffs;     // recurrence from the imputation step
    int rank = 0;    // rank actually fitted (can drop below r under noise)
    int iterations = 0;
    bool converged = false;
    double last_update = 0;
    std::vector<IterationRecord> log;
};

// Low-rank Hankel completion of one channel. Missing entries are imputed by
// fit_annihilator; then either a least-squares exponential fit to the observed
// entries (default) or alternating rank-r projection with the observed entries
// reset to their measured values produces the estimate.
CompletionResult complete_channel(const cvec& seq, const std::vector<int>& missing, int K, int r,
                                  const RecoveryParams& params);

// Largest |missing| allowed for a K x K lift: at least K entries must stay observed.
int max_missing(int K);

}  // namespace dynspec
