#pragma once

#include <string>
#include <vector>

#include "dynspec/cyclic.hpp"
#include "dynspec/dynamics.hpp"

namespace dynspec {

struct ChannelRoots {
    int j = 0;
    int order = 0;
    cvec coeffs;               // c_0 .. c_{r-1} of lambda^r + sum c_l lambda^l
    std::vector<cplx> roots;   // realified where the imaginary part is negligible
    bool has_complex = false;  // a root kept a significant imaginary part
    double residual = 0;       // relative least-squares residual of the recurrence fit
};

enum class AssignmentMode { sorted, oracle };

AssignmentMode parse_assignment_mode(const std::string& s);
std::string to_string(AssignmentMode mode);

struct SpectrumEstimate {
    int d = 0;
    rvec values;
    std::vector<ChannelRoots> per_channel;
    AssignmentMode mode = AssignmentMode::oracle;
};

// Numerical rank of H clamped to [1, max_order].
int estimate_order(const cmat& H, double tau_rel, int max_order);

struct AnnihilatingFit {
    cvec coeffs;
    double residual = 0;  // ||A c - b|| / ||b||
    bool rank_deficient = false;
};
// Least squares on [H]_{:,0:r-1} c = -[H]_{:,r}.
AnnihilatingFit annihilating_coeffs(const cmat& H, int r);

// Roots of lambda^r + sum c_l lambda^l from the companion matrix.
std::vector<cplx> polynomial_roots(const cvec& coeffs);

cplx eval_monic(const cvec& coeffs, cplx lambda);

// Replace roots whose |Im| <= 1e-6 (1 + |Re|) by their real parts.
bool realify(std::vector<cplx>& roots);

// Order estimate, recurrence fit and roots for one cleaned channel sequence.
ChannelRoots channel_roots(const cvec& seq, int K, int j, int max_order, double tau_rel);

SpectrumEstimate assemble_spectrum(const std::vector<ChannelRoots>& per_channel, int d, int m,
                                   AssignmentMode mode, const Spectrum* truth = nullptr);

cvec recover_filter(const SpectrumEstimate& est);

}  // namespace dynspec
