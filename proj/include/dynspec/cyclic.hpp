#pragma once

#include <Eigen/Dense>
#include <complex>

namespace dynspec {

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;

// Forward transform is unnormalized; the inverse carries the 1/n.
cvec dft(const cvec& z);
cvec idft(const cvec& zhat);

cvec circular_convolve(const cvec& a, const cvec& f);

// (S_m z)(j) = z(mj), j in Z_{n/m}
cvec subsample(const cvec& z, int m);

// out(j) = (1/m) sum_n zhat(j + nJ)
cvec aliased_spectrum(const cvec& zhat, int m);

bool is_real(const cvec& z, double tol = 1e-12);

}  // namespace dynspec
