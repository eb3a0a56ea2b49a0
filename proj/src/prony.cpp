#include "dynspec/prony.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dynspec/hankel.hpp"

namespace dynspec {

AssignmentMode parse_assignment_mode(const std::string& s) {
    if (s == "sorted") return AssignmentMode::sorted;
    if (s == "oracle") return AssignmentMode::oracle;
    throw std::invalid_argument("assignment_mode must be sorted or oracle");
}

std::string to_string(AssignmentMode mode) {
    return mode == AssignmentMode::sorted ? "sorted" : "oracle";
}

int estimate_order(const cmat& H, double tau_rel, int max_order) {
    const int r = numerical_rank(H, tau_rel);
    if (r == 0) throw std::invalid_argument("zero matrix has no order");
    return std::clamp(r, 1, max_order);
}

AnnihilatingFit annihilating_coeffs(const cmat& H, int r) {
    if (r < 1 || r >= H.cols()) throw std::invalid_argument("order must satisfy 1 <= r < K");
    const cmat A = H.leftCols(r);
    const cvec b = -H.col(r);
    Eigen::CompleteOrthogonalDecomposition<cmat> cod(A);
    AnnihilatingFit fit;
    fit.coeffs = cod.solve(b);
    fit.rank_deficient = cod.rank() < r;
    const double bn = b.norm();
    fit.residual = bn > 0 ? (A * fit.coeffs - b).norm() / bn : (A * fit.coeffs - b).norm();
    return fit;
}

std::vector<cplx> polynomial_roots(const cvec& c) {
    const int r = int(c.size());
    if (r == 0) return {};
    cmat C = cmat::Zero(r, r);
    for (int i = 1; i < r; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < r; ++i) C(i, r - 1) = -c(i);
    Eigen::ComplexEigenSolver<cmat> es(C, false);
    std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + r);
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });
    return roots;
}

cplx eval_monic(const cvec& c, cplx x) {
    cplx acc = 1.0;
    for (Eigen::Index i = c.size() - 1; i >= 0; --i) acc = acc * x + c(i);
    return acc;
}

bool realify(std::vector<cplx>& roots) {
    bool complex_left = false;
    for (cplx& z : roots) {
        if (std::abs(z.imag()) <= 1e-6 * (1.0 + std::abs(z.real())))
            z = cplx(z.real(), 0.0);
        else
            complex_left = true;
    }
    return complex_left;
}

ChannelRoots channel_roots(const cvec& seq, int K, int j, int max_order, double tau_rel) {
    const cmat H = lift(seq, K);
    ChannelRoots cr;
    cr.j = j;
    cr.order = std::min(estimate_order(H, tau_rel, max_order), K - 1);
    const AnnihilatingFit fit = annihilating_coeffs(H, cr.order);
    cr.coeffs = fit.coeffs;
    cr.residual = fit.residual;
    cr.roots = polynomial_roots(fit.coeffs);
    cr.has_complex = realify(cr.roots);
    return cr;
}

namespace {

std::vector<double> real_parts(const std::vector<cplx>& z) {
    std::vector<double> v;
    for (cplx x : z) v.push_back(x.real());
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

// Root values shared by the mirror pair (j, J-j): sorted matching then averaging.
std::vector<double> paired_values(const ChannelRoots& a, const ChannelRoots& b) {
    std::vector<double> va = real_parts(a.roots), vb = real_parts(b.roots);
    if (va.size() != vb.size()) return va.size() >= vb.size() ? va : vb;
    for (std::size_t i = 0; i < va.size(); ++i) va[i] = 0.5 * (va[i] + vb[i]);
    return va;
}

struct ClassSet {
    std::vector<std::vector<int>> members;  // each class: indices sharing one spectral value
    std::vector<int> fold;
};

ClassSet channel_classes(int j, int d, int m) {
    const int J = d / m;
    ClassSet cs;
    if (j == 0) {
        cs.members.push_back({0});
        cs.fold.push_back(0);
        for (int n = 1; n <= (m - 1) / 2; ++n) {
            cs.members.push_back({n * J, (m - n) * J});
            cs.fold.push_back(std::min(n * J, d - n * J));
        }
    } else {
        for (int n = 0; n < m; ++n) {
            const int k = j + n * J;
            cs.members.push_back({k, d - k});
            cs.fold.push_back(std::min(k, d - k));
        }
    }
    return cs;
}

// Every map from classes to values that uses each value at least once (fewer values
// than classes) or uses no value twice (more values than classes); least squares
// against the truth.
std::vector<double> oracle_assign(const ClassSet& cs, const std::vector<double>& vals, const rvec& truth) {
    const int nc = int(cs.members.size());
    const int nv = int(vals.size());
    if (nv == 0) return std::vector<double>(nc, 0.0);
    std::vector<int> pick(nc, 0), best_pick;
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
        std::vector<int> used(nv, 0);
        for (int v : pick) ++used[v];
        bool ok = true;
        for (int v = 0; v < nv && ok; ++v) {
            if (nv <= nc && used[v] == 0) ok = false;
            if (nv > nc && used[v] > 1) ok = false;
        }
        if (ok) {
            double err = 0;
            for (int c = 0; c < nc; ++c)
                for (int k : cs.members[c]) err += std::pow(vals[pick[c]] - truth(k), 2);
            if (err < best) {
                best = err;
                best_pick = pick;
            }
        }
        int pos = 0;
        while (pos < nc && ++pick[pos] == nv) pick[pos++] = 0;
        if (pos == nc) break;
    }
    std::vector<double> out(nc);
    for (int c = 0; c < nc; ++c) out[c] = vals[best_pick[c]];
    return out;
}

std::vector<double> sorted_assign(const ClassSet& cs, std::vector<double> vals) {
    const int nc = int(cs.members.size());
    std::vector<int> order(nc);
    for (int c = 0; c < nc; ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cs.fold[a] < cs.fold[b]; });
    // too few roots: repeat the last (smallest) one
    while (int(vals.size()) < nc) vals.push_back(vals.empty() ? 0.0 : vals.back());
    std::vector<double> out(nc);
    for (int i = 0; i < nc; ++i) out[order[i]] = vals[i];
    return out;
}

}  // namespace

SpectrumEstimate assemble_spectrum(const std::vector<ChannelRoots>& per_channel, int d, int m,
                                   AssignmentMode mode, const Spectrum* truth) {
    if (m <= 0 || d % m != 0) throw std::invalid_argument("m must divide d");
    const int J = d / m;
    if (int(per_channel.size()) != J) throw std::invalid_argument("missing channel");
    if (mode == AssignmentMode::oracle && (!truth || truth->d != d))
        throw std::invalid_argument("oracle assignment needs the true spectrum");

    SpectrumEstimate est;
    est.d = d;
    est.mode = mode;
    est.per_channel = per_channel;
    est.values = rvec::Zero(d);
    for (int j = 0; j <= J / 2; ++j) {
        const ChannelRoots& a = per_channel[j];
        const ChannelRoots& b = per_channel[(J - j) % J];
        std::vector<double> vals = (j == 0) ? real_parts(a.roots) : paired_values(a, b);
        const ClassSet cs = channel_classes(j, d, m);
        const std::vector<double> assigned =
            mode == AssignmentMode::oracle ? oracle_assign(cs, vals, truth->values) : sorted_assign(cs, vals);
        for (std::size_t c = 0; c < cs.members.size(); ++c)
            for (int k : cs.members[c]) est.values(k) = assigned[c];
    }
    return est;
}

cvec recover_filter(const SpectrumEstimate& est) {
    return idft(est.values.cast<cplx>());
}

}  // namespace dynspec
