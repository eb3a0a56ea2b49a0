#pragma once

#include "dynspec/cyclic.hpp"

namespace dynspec {

// Rank-r projection of lift(seq) followed by anti-diagonal averaging, using a
// block subspace iteration that is warm-started from the previous call. Inside
// an alternating-projection loop consecutive inputs are close, so one or two
// power steps per call track the leading subspace at a fraction of the cost of
// a dense SVD. `dense = true` switches to a full SVD every call.
class HankelRankProjector {
public:
    HankelRankProjector(int K, int r, bool dense = false, int oversample = 4, int power_steps = 1);

    cvec project(const cvec& seq);

    // Leading singular value estimates from the last call (r + oversample of them
    // in fast mode).
    const rvec& singular_values() const { return sv_; }
    // Estimate of sigma_{r+1}; zero if unavailable.
    double next_singular_value() const;

    int K() const { return K_; }
    int rank() const { return r_; }
    void reset() { warm_ = false; }

private:
    int K_, r_, b_;
    bool dense_;
    int power_steps_;
    bool warm_ = false;
    cmat Q_;
    rvec sv_;
};

}  // namespace dynspec
