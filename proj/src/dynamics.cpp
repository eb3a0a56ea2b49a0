#include "dynspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dynspec {

namespace {

void check_odd(int d) {
    if (d < 1 || d % 2 == 0) throw std::invalid_argument("d must be odd");
}

void refresh_corrupted(MeasurementSet& ms) {
    ms.corrupted = (ms.clean + ms.E) + ms.G;
}

}  // namespace

Spectrum generate_symmetric_spectrum(int d, Rng& rng) {
    check_odd(d);
    if (d < 3) throw std::invalid_argument("d must be at least 3");
    Spectrum s{d, rvec::Zero(d)};
    s.values(0) = 1.0;
    for (int k = 1; k <= (d - 1) / 2; ++k) {
        s.values(k) = rng.uniform();
        s.values(d - k) = s.values(k);
    }
    return s;
}

Spectrum generate_monotone_spectrum(int d) {
    check_odd(d);
    Spectrum s{d, rvec::Zero(d)};
    const double scale = d / 4.0;
    for (int k = 0; k <= (d - 1) / 2; ++k) {
        s.values(k) = std::exp(-k / scale);
        if (k > 0) s.values(d - k) = s.values(k);
    }
    return s;
}

rvec random_initial_state(int d, Rng& rng) {
    rvec x(d);
    for (int i = 0; i < d; ++i) x(i) = rng.normal();
    return x;
}

rmat generate_orbit(const Spectrum& spec, const rvec& x0, int L) {
    if (x0.size() != spec.d) throw std::invalid_argument("x0 length must equal d");
    if (L < 1) throw std::invalid_argument("L must be positive");
    rmat orbit(spec.d, L);
    cvec x = x0.cast<cplx>();
    const cvec a = spec.values.cast<cplx>();
    for (int l = 0; l < L; ++l) {
        orbit.col(l) = x.real();
        if (l + 1 < L) x = idft(a.cwiseProduct(dft(x))).real().cast<cplx>();
    }
    return orbit;
}

MeasurementSet measure(const rmat& orbit, int m) {
    const int d = int(orbit.rows());
    if (m <= 0 || d % m != 0) throw std::invalid_argument("m must divide d");
    MeasurementSet ms;
    ms.J = d / m;
    ms.L = int(orbit.cols());
    ms.clean.resize(ms.J, ms.L);
    for (int j = 0; j < ms.J; ++j) ms.clean.row(j) = orbit.row(m * j);
    ms.E = rmat::Zero(ms.J, ms.L);
    ms.G = rmat::Zero(ms.J, ms.L);
    refresh_corrupted(ms);
    return ms;
}

int outlier_count(double alpha, int L) {
    return int(std::floor(alpha * L + 1e-9));
}

void inject_outliers(MeasurementSet& ms, double alpha, double c, Rng& rng) {
    if (alpha < 0 || alpha >= 1) throw std::invalid_argument("alpha must lie in [0,1)");
    const int count = outlier_count(alpha, ms.L);
    // partial Fisher-Yates: first `count` entries are a uniform sample without replacement
    std::vector<int> idx(ms.L);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < count; ++i) {
        int k = i + int(rng.below(std::uint64_t(ms.L - i)));
        std::swap(idx[i], idx[k]);
    }
    std::vector<int> support(idx.begin(), idx.begin() + count);
    std::sort(support.begin(), support.end());

    ms.E.setZero();
    for (int l : support) {
        const double mu = ms.clean.col(l).cwiseAbs().sum() / ms.J;
        for (int j = 0; j < ms.J; ++j) ms.E(j, l) = rng.uniform(-c * mu, c * mu);
    }
    ms.outlier_support = std::move(support);
    refresh_corrupted(ms);
}

void inject_gaussian(MeasurementSet& ms, double sigma, Rng& rng) {
    if (sigma < 0) throw std::invalid_argument("sigma must be nonnegative");
    ms.G.setZero();
    if (sigma > 0) {
        for (int l = 0; l < ms.L; ++l)
            for (int j = 0; j < ms.J; ++j) ms.G(j, l) = sigma * rng.normal();
    }
    refresh_corrupted(ms);
}

}  // namespace dynspec
