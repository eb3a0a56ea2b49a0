#pragma once

#include <vector>

#include "dynspec/cyclic.hpp"

namespace dynspec {

struct HankelChannel {
    int j = 0;
    int K = 0;
    cvec sequence;  // s_0(j), ..., s_{2K-2}(j)
    int theoretical_rank = 0;
};

// Rows of `data` are spatial samples, columns are snapshots. K <= 0 selects floor(L/2).
std::vector<HankelChannel> channel_sequences(const rmat& data, int m, int K = 0);

cmat lift(const cvec& seq, int K);
cmat hankel_project(const cmat& M);
// Anti-diagonal means; throws if the spread on any anti-diagonal exceeds tol.
cvec antidiag_extract(const cmat& H, double tol = 1e-9);
// Anti-diagonal means without the Hankel check.
cvec antidiag_mean(const cmat& M);
// Number of entries on anti-diagonal l of a K x K matrix: min(l+1, 2K-1-l).
rvec antidiag_weights(int K);

struct TruncatedSvd {
    cmat U;
    rvec S;
    cmat V;
    cmat Mr;  // U diag(S) V^H
};

// Dense SVD truncated to rank r (best rank-r Frobenius approximation).
TruncatedSvd truncated_svd(const cmat& M, int r);

rvec singular_values(const cmat& M);
int numerical_rank(const cmat& M, double tau_rel);
int theoretical_rank(int m, int j);
double compute_incoherence(const std::vector<double>& roots, int K);
double condition_number(const cmat& H, int r);

}  // namespace dynspec
