#pragma once

#include <utility>
#include <vector>

#include "dynspec/cyclic.hpp"
#include "dynspec/dynamics.hpp"

namespace dynspec {

double relative_error(const rvec& estimate, const rvec& truth);

// -20 log10(RE); +infinity when RE == 0.
double spectral_snr(double re);

// (SNR_Outlier, SNR_Gauss) in dB from Frobenius norms; +infinity for a zero corruption.
std::pair<double, double> measurement_snrs(const MeasurementSet& ms);

double median(std::vector<double> v);

}  // namespace dynspec
