#include "dynspec/cyclic.hpp"

#include <stdexcept>
#include <unsupported/Eigen/FFT>

namespace dynspec {

namespace {

void check_nonempty(const cvec& z) {
    if (z.size() == 0) throw std::invalid_argument("empty signal");
}

void check_divides(Eigen::Index n, int m) {
    if (m <= 0 || n % m != 0)
        throw std::invalid_argument("m must divide the signal length");
}

}  // namespace

cvec dft(const cvec& z) {
    check_nonempty(z);
    if (z.size() == 1) return z;  // kissfft does not handle n = 1
    Eigen::FFT<double> fft;
    cvec out(z.size());
    fft.fwd(out, z);
    return out;
}

cvec idft(const cvec& zhat) {
    check_nonempty(zhat);
    if (zhat.size() == 1) return zhat;
    Eigen::FFT<double> fft;  // scales by 1/n on inv
    cvec out(zhat.size());
    fft.inv(out, zhat);
    return out;
}

cvec circular_convolve(const cvec& a, const cvec& f) {
    if (a.size() != f.size()) throw std::invalid_argument("length mismatch");
    cvec prod = dft(a).cwiseProduct(dft(f));
    return idft(prod);
}

cvec subsample(const cvec& z, int m) {
    check_divides(z.size(), m);
    const Eigen::Index J = z.size() / m;
    cvec out(J);
    for (Eigen::Index j = 0; j < J; ++j) out(j) = z(m * j);
    return out;
}

cvec aliased_spectrum(const cvec& zhat, int m) {
    check_divides(zhat.size(), m);
    const Eigen::Index J = zhat.size() / m;
    cvec out = cvec::Zero(J);
    for (Eigen::Index j = 0; j < J; ++j) {
        for (int n = 0; n < m; ++n) out(j) += zhat(j + n * J);
        out(j) /= double(m);
    }
    return out;
}

bool is_real(const cvec& z, double tol) {
    for (Eigen::Index i = 0; i < z.size(); ++i)
        if (std::abs(z(i).imag()) > tol) return false;
    return true;
}

}  // namespace dynspec
