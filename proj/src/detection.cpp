#include "dynspec/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dynspec/completion.hpp"
#include "dynspec/hankel.hpp"
#include "dynspec/lowrank.hpp"
#include "dynspec/prony.hpp"

namespace dynspec {

namespace {

double median_abs(const cvec& s) {
    std::vector<double> a(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) a[i] = std::abs(s(i));
    const std::size_t mid = a.size() / 2;
    std::nth_element(a.begin(), a.begin() + mid, a.end());
    double med = a[mid];
    if (a.size() % 2 == 0) {
        const double lo = *std::max_element(a.begin(), a.begin() + mid);
        med = 0.5 * (med + lo);
    }
    return med;
}

// Window s[k .. k+2r-1] fixes an order-r recurrence; extend it both ways.
bool window_model(const cvec& s, int k, int r, cvec& model) {
    const int N = int(s.size());
    cmat H(r, r);
    cvec rhs(r);
    for (int i = 0; i < r; ++i) {
        for (int l = 0; l < r; ++l) H(i, l) = s(k + i + l);
        rhs(i) = -s(k + i + r);
    }
    Eigen::FullPivLU<cmat> lu(H);
    if (!lu.isInvertible()) return false;
    const cvec c = lu.solve(rhs);
    model.resize(N);
    model.segment(k, 2 * r) = s.segment(k, 2 * r);
    for (int n = k + 2 * r; n < N; ++n) {
        cplx acc = 0;
        for (int i = 0; i < r; ++i) acc -= c(i) * model(n - r + i);
        model(n) = acc;
    }
    const double c0 = std::abs(c(0));
    for (int n = k - 1; n >= 0; --n) {
        if (c0 < 1e-300) {
            model(n) = cplx(INFINITY, 0);
            continue;
        }
        cplx acc = model(n + r);
        for (int i = 1; i < r; ++i) acc += c(i) * model(n + i);
        model(n) = -acc / c(0);
    }
    return true;
}

bool better(const RefinedSupport& a, const RefinedSupport& b) {
    if (a.consistent != b.consistent) return a.consistent;
    if (a.consistent && a.support.size() != b.support.size()) return a.support.size() < b.support.size();
    return a.max_residual < b.max_residual;
}

}  // namespace

double flag_floor(const cvec& seq, const RecoveryParams& params) {
    return std::max(params.eta_rel * median_abs(seq), params.noise_floor);
}

std::vector<int> alternating_projection_support(const cvec& s, int K, int r, const RecoveryParams& params,
                                                double floor, std::vector<IterationRecord>* log,
                                                int* iterations) {
    const int N = 2 * K - 1;
    HankelRankProjector proj(K, r, !params.fast_svd);
    const rvec sw = antidiag_weights(K).cwiseSqrt();
    const double snorm = std::max(s.norm(), 1e-300);
    cvec o = cvec::Zero(N);
    std::vector<int> support, prev;
    int stable = 0;
    double decay = 1.0;
    int t = 0;
    for (; t < params.max_iters; ++t, decay *= params.gamma) {
        const cvec h = proj.project(s - o);
        const double s1 = proj.singular_values()(0);
        const double s_next = proj.next_singular_value();
        const double zeta = params.beta * (s_next + decay * s1);
        const cvec rho = s - h;
        support.clear();
        o.setZero();
        for (int l = 0; l < N; ++l) {
            const double a = std::abs(rho(l));
            if (sw(l) * a > zeta && a > floor) {
                o(l) = rho(l);
                support.push_back(l);
            }
        }
        const double resid = (s - h - o).norm() / snorm;
        if (log) log->push_back({t, resid, zeta, int(support.size())});
        stable = (support == prev) ? stable + 1 : 0;
        prev = support;
        if (resid <= params.tol) break;
        if (stable >= 5 && decay * s1 <= s_next) break;
    }
    if (iterations) *iterations = std::min(t + 1, params.max_iters);
    return support;
}

std::vector<int> consensus_support(const cvec& s, int r, double floor) {
    const int N = int(s.size());
    int best_count = -1;
    cvec best, model;
    for (int k = 0; k + 2 * r <= N; ++k) {
        if (!window_model(s, k, r, model)) continue;
        int count = 0;
        for (int l = 0; l < N; ++l)
            if (std::abs(s(l) - model(l)) <= floor) ++count;
        if (count > best_count) {
            best_count = count;
            best = model;
        }
    }
    std::vector<int> support;
    if (best_count < 0) return support;
    for (int l = 0; l < N; ++l)
        if (!(std::abs(s(l) - best(l)) <= floor)) support.push_back(l);
    return support;
}

RefinedSupport refine_support(const cvec& s, int K, int r, std::vector<int> support, double floor,
                              const RecoveryParams& params, int max_rounds) {
    const int N = int(s.size());
    RefinedSupport out;
    for (int round = 0; round < max_rounds; ++round) {
        if (int(support.size()) > max_missing(K)) {
            out.support = support;
            out.consistent = false;
            out.max_residual = INFINITY;
            return out;
        }
        AnnihilatorFit fit = fit_annihilator(s, support, r);
        int rank = r;
        if (params.noise_std > 0) {
            rank = noise_rank(fit.filled, K, r, params.noise_std, params.rank_noise_factor);
            if (rank < r) fit = fit_annihilator(s, support, rank);
        }
        const cvec model = params.exponential_fit
                               ? fit_low_rank_model(s, support, K, fit, params.real_roots, params.noise_std).model
                               : recurrence_model(fit.coeffs, s, support);
        std::vector<bool> in(N, false);
        for (int p : support) in[p] = true;
        double worst = 0;
        bool finite = true;
        for (int l = 0; l < N; ++l) {
            const double a = std::abs(s(l) - model(l));
            if (!std::isfinite(a)) finite = false;
            if (!in[l]) worst = std::max(worst, a);
        }
        out.support = support;
        out.model = model;
        out.max_residual = finite ? worst : INFINITY;
        out.consistent = finite && worst <= floor;
        if (!finite) return out;

        // add the clearly worst observed entries, release missing ones the model reproduces
        const double add_level = std::max(floor, 0.5 * worst);
        std::vector<int> next;
        bool changed = false;
        for (int l = 0; l < N; ++l) {
            const double a = std::abs(s(l) - model(l));
            if (in[l]) {
                if (a > floor) next.push_back(l);
                else changed = true;
            } else if (a > add_level) {
                next.push_back(l);
                changed = true;
            }
        }
        if (!changed) return out;
        support = std::move(next);
    }
    return out;
}

DetectionResult detect_outliers(const cvec& seq0, int K, int r, const RecoveryParams& params) {
    const int N = 2 * K - 1;
    if (r < 1 || r >= K) throw std::invalid_argument("rank must satisfy 1 <= r < K");
    if (seq0.size() < N) throw std::invalid_argument("sequence shorter than 2K-1");
    const cvec s = seq0.head(N);
    const double floor = flag_floor(s, params);

    DetectionResult res;
    const std::vector<int> ap = alternating_projection_support(s, K, r, params, floor, &res.log, &res.iterations);
    RefinedSupport best = refine_support(s, K, r, ap, floor, params);
    res.source = "alternating-projection";
    if (!best.consistent || !best.support.empty()) {
        RefinedSupport alt = refine_support(s, K, r, consensus_support(s, r, floor), floor, params);
        if (better(alt, best)) {
            best = std::move(alt);
            res.source = "window-consensus";
        }
    }

    res.support = best.support;
    res.converged = best.consistent;
    res.max_residual = best.max_residual;
    res.lowrank = best.model;
    res.sparse = cvec::Zero(N);
    for (int p : res.support) res.sparse(p) = s(p) - res.lowrank(p);
    return res;
}

}  // namespace dynspec
