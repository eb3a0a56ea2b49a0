#include "dynspec/hankel.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynspec {

std::vector<HankelChannel> channel_sequences(const rmat& data, int m, int K) {
    const int J = int(data.rows());
    const int L = int(data.cols());
    if (K <= 0) K = L / 2;
    if (2 * K > L) throw std::invalid_argument("2K must not exceed L");
    const int N = 2 * K - 1;
    cmat S(J, N);
    for (int l = 0; l < N; ++l) S.col(l) = dft(data.col(l).cast<cplx>());
    std::vector<HankelChannel> out(J);
    for (int j = 0; j < J; ++j) {
        out[j].j = j;
        out[j].K = K;
        out[j].sequence = S.row(j).transpose();
        out[j].theoretical_rank = theoretical_rank(m, j);
    }
    return out;
}

cmat lift(const cvec& seq, int K) {
    if (K < 1 || seq.size() < 2 * K - 1) throw std::invalid_argument("sequence too short for lift");
    cmat H(K, K);
    for (int q = 0; q < K; ++q)
        for (int p = 0; p < K; ++p) H(p, q) = seq(p + q);
    return H;
}

cvec antidiag_mean(const cmat& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("square matrix required");
    const int K = int(M.rows());
    cvec sum = cvec::Zero(2 * K - 1);
    for (int q = 0; q < K; ++q)
        for (int p = 0; p < K; ++p) sum(p + q) += M(p, q);
    const rvec w = antidiag_weights(K);
    for (int l = 0; l < 2 * K - 1; ++l) sum(l) /= w(l);
    return sum;
}

cmat hankel_project(const cmat& M) {
    return lift(antidiag_mean(M), int(M.rows()));
}

cvec antidiag_extract(const cmat& H, double tol) {
    cvec seq = antidiag_mean(H);
    const int K = int(H.rows());
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    for (int q = 0; q < K; ++q)
        for (int p = 0; p < K; ++p)
            if (std::abs(H(p, q) - seq(p + q)) > tol * scale)
                throw std::invalid_argument("matrix is not Hankel within tolerance");
    return seq;
}

rvec antidiag_weights(int K) {
    rvec w(2 * K - 1);
    for (int l = 0; l < 2 * K - 1; ++l) w(l) = std::min(l + 1, 2 * K - 1 - l);
    return w;
}

TruncatedSvd truncated_svd(const cmat& M, int r) {
    const int n = int(std::min(M.rows(), M.cols()));
    if (r < 0 || r > n) throw std::invalid_argument("rank out of range");
    Eigen::BDCSVD<cmat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    TruncatedSvd t;
    t.U = svd.matrixU().leftCols(r);
    t.S = svd.singularValues().head(r);
    t.V = svd.matrixV().leftCols(r);
    t.Mr = t.U * t.S.asDiagonal() * t.V.adjoint();
    return t;
}

rvec singular_values(const cmat& M) {
    Eigen::BDCSVD<cmat> svd(M);
    return svd.singularValues();
}

int numerical_rank(const cmat& M, double tau_rel) {
    if (M.size() == 0) return 0;
    const rvec s = singular_values(M);
    if (s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tau_rel * s(0)) ++r;
    return r;
}

int theoretical_rank(int m, int j) {
    if (m < 1 || m % 2 == 0) throw std::invalid_argument("m must be odd");
    return j == 0 ? (m + 1) / 2 : m;
}

double compute_incoherence(const std::vector<double>& roots, int K) {
    const int r = int(roots.size());
    if (r == 0 || K < r) throw std::invalid_argument("need 1 <= #roots <= K");
    rmat V(K, r);
    for (int t = 0; t < r; ++t) {
        double p = 1.0;
        for (int k = 0; k < K; ++k) {
            V(k, t) = p;
            p *= roots[t];
        }
    }
    const rmat gram = V.transpose() * V;
    const double smin = Eigen::JacobiSVD<rmat>(gram).singularValues().minCoeff();
    if (smin <= 1e-14 * gram.cwiseAbs().maxCoeff())
        throw std::invalid_argument("Vandermonde Gram matrix is singular (repeated roots)");
    return K / smin;
}

double condition_number(const cmat& H, int r) {
    const rvec s = singular_values(H);
    if (r < 1 || r > s.size()) throw std::invalid_argument("rank out of range");
    if (s(r - 1) < 1e-14 * s(0)) throw std::invalid_argument("sigma_r is numerically zero");
    return s(0) / s(r - 1);
}

}  // namespace dynspec
