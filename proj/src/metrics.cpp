#include "dynspec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dynspec {

namespace {
double ratio_db(double num, double den) {
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(num / den);
}
}  // namespace

double relative_error(const rvec& estimate, const rvec& truth) {
    if (estimate.size() != truth.size()) throw std::invalid_argument("length mismatch");
    const double tn = truth.norm();
    if (tn == 0.0) throw std::invalid_argument("zero truth vector");
    return (estimate - truth).norm() / tn;
}

double spectral_snr(double re) {
    if (re < 0) throw std::invalid_argument("negative relative error");
    if (re == 0.0) return std::numeric_limits<double>::infinity();
    return -20.0 * std::log10(re);
}

std::pair<double, double> measurement_snrs(const MeasurementSet& ms) {
    const double y = ms.clean.norm();
    return {ratio_db(y, ms.E.norm()), ratio_db(y, ms.G.norm())};
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace dynspec
