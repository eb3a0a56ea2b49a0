#pragma once

#include <vector>

#include "dynspec/cyclic.hpp"
#include "dynspec/rng.hpp"

namespace dynspec {

struct Spectrum {
    int d = 0;
    rvec values;  // ahat(k), real and symmetric: ahat(k) = ahat(d-k)
};

struct MeasurementSet {
    int J = 0;
    int L = 0;
    rmat clean;      // J x L, column l is y_l
    rmat corrupted;  // clean + E + G
    rmat E;
    rmat G;
    std::vector<int> outlier_support;  // sorted time indices
};

Spectrum generate_symmetric_spectrum(int d, Rng& rng);
Spectrum generate_monotone_spectrum(int d);

rvec random_initial_state(int d, Rng& rng);

// d x L; column l is x_l, x_{l+1} = idft(ahat .* dft(x_l))
rmat generate_orbit(const Spectrum& spec, const rvec& x0, int L);

MeasurementSet measure(const rmat& orbit, int m);
void inject_outliers(MeasurementSet& ms, double alpha, double c, Rng& rng);
void inject_gaussian(MeasurementSet& ms, double sigma, Rng& rng);

// Number of outlier columns for rate alpha: floor(alpha * L), guarded against
// representation error (0.07 * 300 must give 21, not 20).
int outlier_count(double alpha, int L);

}  // namespace dynspec
