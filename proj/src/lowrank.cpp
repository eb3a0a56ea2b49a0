#include "dynspec/lowrank.hpp"

#include <algorithm>
#include <stdexcept>

#include "dynspec/hankel.hpp"
#include "dynspec/rng.hpp"

namespace dynspec {

namespace {

cmat orthonormalize(const cmat& Y) {
    Eigen::HouseholderQR<cmat> qr(Y);
    return qr.householderQ() * cmat::Identity(Y.rows(), Y.cols());
}

}  // namespace

HankelRankProjector::HankelRankProjector(int K, int r, bool dense, int oversample, int power_steps)
    : K_(K), r_(r), b_(std::min(K, r + oversample)), dense_(dense), power_steps_(power_steps) {
    if (r < 1 || r > K) throw std::invalid_argument("rank out of range");
}

double HankelRankProjector::next_singular_value() const {
    return sv_.size() > r_ ? sv_(r_) : 0.0;
}

cvec HankelRankProjector::project(const cvec& seq) {
    const cmat H = lift(seq, K_);
    if (dense_) {
        Eigen::BDCSVD<cmat> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
        sv_ = svd.singularValues();
        const cmat Mr = svd.matrixU().leftCols(r_) * sv_.head(r_).asDiagonal() *
                        svd.matrixV().leftCols(r_).adjoint();
        return antidiag_mean(Mr);
    }

    int steps = power_steps_;
    if (!warm_) {
        // fixed start so results never depend on call history across solver instances
        Rng rng(0x5eedULL + std::uint64_t(K_) * 131 + std::uint64_t(r_));
        Q_.resize(K_, b_);
        for (int c = 0; c < b_; ++c)
            for (int p = 0; p < K_; ++p) Q_(p, c) = cplx(rng.normal(), rng.normal());
        Q_ = orthonormalize(H * Q_);
        steps = std::max(steps, 4);
        warm_ = true;
    }
    for (int s = 0; s < steps; ++s) {
        const cmat Z = H.adjoint() * Q_;
        Q_ = orthonormalize(H * Z);
    }
    // Rayleigh-Ritz on the block
    const cmat B = Q_.adjoint() * H;
    Eigen::JacobiSVD<cmat> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    sv_ = svd.singularValues();
    const cmat U = Q_ * svd.matrixU();
    Q_ = U;
    const cmat Mr = U.leftCols(r_) * sv_.head(r_).asDiagonal() * svd.matrixV().leftCols(r_).adjoint();
    return antidiag_mean(Mr);
}

}  // namespace dynspec
