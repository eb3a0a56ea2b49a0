#include "dynspec/completion.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "dynspec/hankel.hpp"
#include "dynspec/lowrank.hpp"
#include "dynspec/prony.hpp"

namespace dynspec {

namespace {

// F_k = sum_{i<=r} c_i s_{k+i}, c_r = 1
cvec recurrence_residual(const cvec& s, const cvec& c, int r) {
    const int rows = int(s.size()) - r;
    cvec F(rows);
    for (int k = 0; k < rows; ++k) {
        cplx acc = s(k + r);
        for (int i = 0; i < r; ++i) acc += c(i) * s(k + i);
        F(k) = acc;
    }
    return F;
}

cvec least_squares(const cmat& A, const cvec& b) {
    Eigen::CompleteOrthogonalDecomposition<cmat> cod(A);
    return cod.solve(b);
}

// Missing entries given the recurrence: min_x || F_obs + A x ||.
void impute_given_coeffs(cvec& s, const cvec& c, const std::vector<int>& missing, int r) {
    if (missing.empty()) return;
    for (int p : missing) s(p) = 0.0;
    const cvec F = recurrence_residual(s, c, r);
    const int rows = int(F.size());
    cmat A = cmat::Zero(rows, Eigen::Index(missing.size()));
    for (std::size_t a = 0; a < missing.size(); ++a) {
        const int p = missing[a];
        for (int k = std::max(0, p - r); k <= std::min(rows - 1, p); ++k)
            A(k, Eigen::Index(a)) = (p - k == r) ? cplx(1.0) : c(p - k);
    }
    const cvec x = least_squares(A, -F);
    for (std::size_t a = 0; a < missing.size(); ++a) s(missing[a]) = x(Eigen::Index(a));
}

cvec initial_coeffs(const cvec& s, const std::vector<bool>& is_missing, int r) {
    const int rows = int(s.size()) - r;
    std::vector<int> clean_rows;
    for (int k = 0; k < rows; ++k) {
        bool ok = true;
        for (int i = 0; i <= r && ok; ++i) ok = !is_missing[k + i];
        if (ok) clean_rows.push_back(k);
    }
    std::vector<int> use = clean_rows;
    if (int(use.size()) < 2 * r) {
        use.resize(rows);
        for (int k = 0; k < rows; ++k) use[k] = k;
    }
    cmat A(Eigen::Index(use.size()), r);
    cvec b(Eigen::Index(use.size()));
    for (std::size_t n = 0; n < use.size(); ++n) {
        const int k = use[n];
        for (int i = 0; i < r; ++i) A(Eigen::Index(n), i) = s(k + i);
        b(Eigen::Index(n)) = -s(k + r);
    }
    return least_squares(A, b);
}

}  // namespace

int max_missing(int K) { return K - 1; }

AnnihilatorFit fit_annihilator(const cvec& seq, const std::vector<int>& missing, int r, int max_iters) {
    const int N = int(seq.size());
    if (r < 1 || N < 2 * r + 1) throw std::invalid_argument("sequence too short for recurrence order");
    std::vector<bool> is_missing(N, false);
    for (int p : missing) {
        if (p < 0 || p >= N) throw std::invalid_argument("missing index out of range");
        is_missing[p] = true;
    }

    cvec s = seq;
    for (int p : missing) s(p) = 0.0;
    double obs_norm = 0;
    for (int l = 0; l < N; ++l)
        if (!is_missing[l]) obs_norm += std::norm(s(l));
    obs_norm = std::sqrt(obs_norm);
    if (obs_norm == 0) obs_norm = 1;

    cvec c = initial_coeffs(s, is_missing, r);
    impute_given_coeffs(s, c, missing, r);

    const int q = int(missing.size());
    const int rows = N - r;
    cvec F = recurrence_residual(s, c, r);
    double fnorm = F.norm();
    double mu = 0.0;
    int it = 0;
    for (; it < max_iters && fnorm > 1e-15 * obs_norm; ++it) {
        cmat Jm = cmat::Zero(rows, r + q);
        for (int k = 0; k < rows; ++k)
            for (int i = 0; i < r; ++i) Jm(k, i) = s(k + i);
        for (int a = 0; a < q; ++a) {
            const int p = missing[a];
            for (int k = std::max(0, p - r); k <= std::min(rows - 1, p); ++k)
                Jm(k, r + a) = (p - k == r) ? cplx(1.0) : c(p - k);
        }
        bool accepted = false;
        for (int tries = 0; tries < 12 && !accepted; ++tries) {
            cvec delta;
            if (mu == 0.0) {
                delta = least_squares(Jm, -F);
            } else {
                cmat Aug(rows + r + q, r + q);
                Aug << Jm, std::sqrt(mu) * cmat::Identity(r + q, r + q);
                cvec rhs = cvec::Zero(rows + r + q);
                rhs.head(rows) = -F;
                delta = least_squares(Aug, rhs);
            }
            cvec c_new = c + delta.head(r);
            cvec s_new = s;
            for (int a = 0; a < q; ++a) s_new(missing[a]) += delta(r + a);
            const cvec F_new = recurrence_residual(s_new, c_new, r);
            const double fn = F_new.norm();
            if (std::isfinite(fn) && fn < fnorm) {
                accepted = true;
                const double gain = fnorm - fn;
                c = c_new;
                s = s_new;
                F = F_new;
                fnorm = fn;
                mu *= 0.1;
                if (mu < 1e-14) mu = 0.0;
                if (gain <= 1e-10 * fn) it = max_iters;  // stalled at a noisy minimum
            } else {
                const double scale = Jm.cwiseAbs2().colwise().sum().maxCoeff();
                mu = (mu == 0.0) ? 1e-10 * scale : mu * 10.0;
            }
        }
        if (!accepted) break;
    }

    AnnihilatorFit fit;
    fit.coeffs = c;
    fit.filled = s;
    fit.residual = fnorm / obs_norm;
    fit.iterations = std::min(it, max_iters);
    return fit;
}

cvec recurrence_model(const cvec& coeffs, const cvec& seq, const std::vector<int>& missing) {
    const int N = int(seq.size());
    const int r = int(coeffs.size());
    cmat B = cmat::Zero(N, r);
    for (int i = 0; i < r; ++i) B(i, i) = 1.0;
    for (int n = r; n < N; ++n)
        for (int i = 0; i < r; ++i) B.row(n) -= coeffs(i) * B.row(n - r + i);
    std::vector<bool> is_missing(N, false);
    for (int p : missing) is_missing[p] = true;
    std::vector<int> obs;
    for (int l = 0; l < N; ++l)
        if (!is_missing[l]) obs.push_back(l);
    cmat A(Eigen::Index(obs.size()), r);
    cvec b(Eigen::Index(obs.size()));
    for (std::size_t n = 0; n < obs.size(); ++n) {
        A.row(Eigen::Index(n)) = B.row(obs[n]);
        b(Eigen::Index(n)) = seq(obs[n]);
    }
    const cvec u = least_squares(A, b);
    return B * u;
}

namespace {

cmat powers(const std::vector<cplx>& roots, int N) {
    const int r = int(roots.size());
    cmat V(N, r);
    for (int t = 0; t < r; ++t) {
        cplx p = 1.0;
        for (int l = 0; l < N; ++l) {
            V(l, t) = p;
            p *= roots[t];
        }
    }
    return V;
}

}  // namespace

ExponentialFit fit_exponentials(const cvec& seq, const std::vector<int>& missing, const std::vector<cplx>& roots0,
                                bool real_roots, int max_iters) {
    const int N = int(seq.size());
    const int r = int(roots0.size());
    if (r < 1) throw std::invalid_argument("need at least one root");
    std::vector<bool> is_missing(N, false);
    for (int p : missing)
        if (p >= 0 && p < N) is_missing[p] = true;
    std::vector<int> obs;
    for (int l = 0; l < N; ++l)
        if (!is_missing[l]) obs.push_back(l);
    const int M = int(obs.size());
    if (M < 2 * r) throw std::invalid_argument("too few observed entries for the exponential fit");
    cvec b(M);
    for (int n = 0; n < M; ++n) b(n) = seq(obs[n]);

    auto restrict_rows = [&](const cmat& V) {
        cmat A(M, V.cols());
        for (int n = 0; n < M; ++n) A.row(n) = V.row(obs[n]);
        return A;
    };
    auto residual = [&](const std::vector<cplx>& l, const cvec& amp) {
        return cvec(restrict_rows(powers(l, N)) * amp - b);
    };

    std::vector<cplx> lam = roots0;
    if (real_roots)
        for (auto& z : lam) z = z.real();
    cvec a = least_squares(restrict_rows(powers(lam, N)), b);
    cvec R = residual(lam, a);
    double cost = R.squaredNorm();

    // real parametrisation: per root Re(lambda) [, Im(lambda)], Re(a), Im(a)
    const int per = real_roots ? 3 : 4;
    const int P = per * r;
    double mu = 0.0;
    int it = 0;
    for (; it < max_iters; ++it) {
        cmat G(M, P);
        const cplx I(0.0, 1.0);
        for (int t = 0; t < r; ++t) {
            cplx p = 1.0, dp = 0.0;  // lambda^l and l lambda^(l-1)
            int next = 0;
            const int c0 = per * t;
            for (int l = 0; l < N && next < M; ++l) {
                if (l == obs[next]) {
                    G(next, c0) = a(t) * dp;
                    if (!real_roots) G(next, c0 + 1) = I * a(t) * dp;
                    G(next, c0 + per - 2) = p;
                    G(next, c0 + per - 1) = I * p;
                    ++next;
                }
                dp = dp * lam[t] + p;
                p *= lam[t];
            }
        }
        rmat Jm(2 * M, P);
        Jm.topRows(M) = G.real();
        Jm.bottomRows(M) = G.imag();
        rvec Rr(2 * M);
        Rr.head(M) = R.real();
        Rr.tail(M) = R.imag();
        const rvec colscale = Jm.colwise().squaredNorm().transpose();
        bool accepted = false;
        for (int tries = 0; tries < 12 && !accepted; ++tries) {
            rvec delta;
            if (mu == 0.0) {
                delta = Eigen::CompleteOrthogonalDecomposition<rmat>(Jm).solve(-Rr);
            } else {
                rmat Aug = rmat::Zero(2 * M + P, P);
                Aug.topRows(2 * M) = Jm;
                for (int i = 0; i < P; ++i) Aug(2 * M + i, i) = std::sqrt(mu * std::max(colscale(i), 1e-300));
                rvec rhs = rvec::Zero(2 * M + P);
                rhs.head(2 * M) = -Rr;
                delta = Eigen::CompleteOrthogonalDecomposition<rmat>(Aug).solve(rhs);
            }
            std::vector<cplx> lam_new = lam;
            cvec a_new = a;
            for (int t = 0; t < r; ++t) {
                const int c0 = per * t;
                lam_new[t] += real_roots ? cplx(delta(c0)) : cplx(delta(c0), delta(c0 + 1));
                a_new(t) += cplx(delta(c0 + per - 2), delta(c0 + per - 1));
            }
            const cvec R_new = residual(lam_new, a_new);
            const double c_new = R_new.squaredNorm();
            if (std::isfinite(c_new) && c_new < cost) {
                accepted = true;
                const double gain = cost - c_new;
                lam = lam_new;
                a = a_new;
                R = R_new;
                cost = c_new;
                mu *= 0.1;
                if (mu < 1e-12) mu = 0.0;
                if (gain <= 1e-12 * cost) it = max_iters;
            } else {
                mu = (mu == 0.0) ? 1e-8 : mu * 10.0;
            }
        }
        if (!accepted) break;
    }

    ExponentialFit fit;
    fit.roots = lam;
    fit.amplitudes = a;
    fit.model = powers(lam, N) * a;
    fit.rms = std::sqrt(cost / M);
    fit.iterations = std::min(it, max_iters);
    return fit;
}

std::vector<cplx> subspace_roots(const cvec& seq, int K, int r) {
    const TruncatedSvd t = truncated_svd(lift(seq, K), r);
    const cmat up = t.U.topRows(K - 1), down = t.U.bottomRows(K - 1);
    const cmat Phi = Eigen::CompleteOrthogonalDecomposition<cmat>(up).solve(down);
    Eigen::ComplexEigenSolver<cmat> es(Phi);
    std::vector<cplx> roots(r);
    for (int i = 0; i < r; ++i) roots[i] = es.eigenvalues()(i);
    return roots;
}

ExponentialFit fit_low_rank_model(const cvec& seq, const std::vector<int>& missing, int K, const AnnihilatorFit& fit,
                                  bool real_roots, double noise_std) {
    const int r = int(fit.coeffs.size());
    std::vector<std::vector<cplx>> starts{polynomial_roots(fit.coeffs), subspace_roots(fit.filled, K, r)};
    for (std::size_t i = 0, n = starts.size(); i < n; ++i) {
        std::vector<cplx> re = starts[i];
        bool complex_roots = false;
        for (auto& z : re) {
            complex_roots = complex_roots || z.imag() != 0.0;
            z = z.real();
        }
        if (complex_roots && !real_roots) starts.push_back(re);
    }
    ExponentialFit best;
    best.rms = INFINITY;
    auto consider = [&](const std::vector<cplx>& st) {
        ExponentialFit f = fit_exponentials(seq, missing, st, real_roots);
        if (f.rms < best.rms || best.model.size() == 0) best = std::move(f);
    };
    for (const auto& st : starts) consider(st);
    const double good = 1.25 * noise_std + 1e-12 * seq.cwiseAbs().maxCoeff();
    if (real_roots && best.rms > good) {
        // grow the model one real root at a time from a coarse grid
        static const double grid[] = {-0.95, -0.75, -0.5, -0.25, 0.0, 0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 0.97};
        std::vector<cplx> base;
        for (int q = 1; q <= r; ++q) {
            ExponentialFit stage;
            stage.rms = INFINITY;
            for (double g : grid) {
                std::vector<cplx> st = base;
                st.push_back(g);
                ExponentialFit f = fit_exponentials(seq, missing, st, true);
                if (f.rms < stage.rms || stage.model.size() == 0) stage = std::move(f);
            }
            base = stage.roots;
            if (q == r && stage.rms < best.rms) best = std::move(stage);
        }
    }
    return best;
}

int noise_rank(const cvec& seq, int K, int r_max, double noise_std, double factor, double tau_rel) {
    const rvec sv = singular_values(lift(seq, K));
    if (sv.size() == 0 || sv(0) == 0) return 1;
    const double thr = std::max(tau_rel * sv(0), factor * std::sqrt(double(K)) * noise_std);
    int r = 0;
    while (r < sv.size() && sv(r) > thr) ++r;
    return std::clamp(r, 1, r_max);
}

CompletionResult complete_channel(const cvec& seq, const std::vector<int>& missing, int K, int r,
                                  const RecoveryParams& params) {
    const int N = 2 * K - 1;
    if (seq.size() < N) throw std::invalid_argument("sequence shorter than 2K-1");
    if (r < 1 || r >= K) throw std::invalid_argument("rank must satisfy 1 <= r < K");
    std::vector<int> miss;
    for (int p : missing)
        if (p < N) miss.push_back(p);
    std::sort(miss.begin(), miss.end());
    miss.erase(std::unique(miss.begin(), miss.end()), miss.end());
    if (int(miss.size()) > max_missing(K))
        throw std::runtime_error("too many missing entries: fewer than K observed anti-diagonals remain");

    CompletionResult out;
    const cvec s = seq.head(N);
    AnnihilatorFit fit = fit_annihilator(s, miss, r);
    int rank = r;
    if (params.noise_std > 0) {
        rank = noise_rank(fit.filled, K, r, params.noise_std, params.rank_noise_factor);
        if (rank < r) fit = fit_annihilator(s, miss, rank);
    }
    out.coeffs = fit.coeffs;
    out.rank = rank;

    if (params.exponential_fit) {
        const ExponentialFit ef = fit_low_rank_model(s, miss, K, fit, params.real_roots, params.noise_std);
        out.sequence = ef.model;
        out.iterations = ef.iterations;
        out.converged = true;
        const double scale = std::max(s.cwiseAbs().maxCoeff(), 1e-300);
        out.last_update = ef.rms / scale;
        out.log.push_back({ef.iterations, out.last_update, params.tol, int(miss.size())});
        return out;
    }

    HankelRankProjector proj(K, rank, !params.fast_svd);
    cvec cur = fit.filled;
    cvec h;
    for (int it = 1; it <= params.max_iters; ++it) {
        h = proj.project(cur);
        double upd = 0;
        for (int p : miss) {
            upd = std::max(upd, std::abs(h(p) - cur(p)));
            cur(p) = h(p);
        }
        const double scale = std::max(cur.cwiseAbs().maxCoeff(), 1e-300);
        out.iterations = it;
        out.last_update = upd / scale;
        out.log.push_back({it, out.last_update, params.tol, int(miss.size())});
        if (out.last_update <= params.tol) {
            out.converged = true;
            break;
        }
    }
    out.sequence = h;
    return out;
}

}  // namespace dynspec
