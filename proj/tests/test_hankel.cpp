#include <doctest.h>

#include <cmath>

#include "dynspec/dynamics.hpp"
#include "dynspec/hankel.hpp"
#include "dynspec/lowrank.hpp"
#include "dynspec/rng.hpp"

using namespace dynspec;

namespace {

cvec two_exp(int n) {
    cvec s(n);
    for (int l = 0; l < n; ++l) s(l) = 2.0 * std::pow(0.5, l) + 3.0 * std::pow(0.25, l);
    return s;
}

cmat random_matrix(int r, int c, Rng& rng) {
    cmat M(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) M(i, j) = cplx(rng.normal(), rng.normal());
    return M;
}

rmat monotone_measurements(int L, std::uint64_t seed) {
    Rng rng(seed);
    const Spectrum spec = generate_monotone_spectrum(15);
    return measure(generate_orbit(spec, random_initial_state(15, rng), L), 3).clean;
}

}  // namespace

TEST_CASE("lift and extract") {
    cvec s(3);
    s << 1, 2, 3;
    cmat H = lift(s, 2);
    cmat expect(2, 2);
    expect << 1, 2, 2, 3;
    CHECK(H == expect);
    CHECK(antidiag_extract(H) == s);

    Rng rng(1);
    cvec r(9);
    for (int i = 0; i < 9; ++i) r(i) = cplx(rng.normal(), rng.normal());
    CHECK((antidiag_extract(lift(r, 5)) - r).norm() < 1e-14);

    cvec g(7);
    for (int l = 0; l < 7; ++l) g(l) = std::pow(0.7, l);
    CHECK(numerical_rank(lift(g, 4), 1e-8) == 1);
    CHECK(numerical_rank(lift(two_exp(7), 4), 1e-8) == 2);
}

TEST_CASE("hankel projection") {
    cmat M(2, 2);
    M << 1, 2, 4, 3;
    cmat expect(2, 2);
    expect << 1, 3, 3, 3;
    CHECK((hankel_project(M) - expect).norm() < 1e-15);

    cmat E(2, 2);
    E << 1, 3, 3, 3;
    cvec e(3);
    e << 1, 3, 3;
    CHECK(antidiag_extract(E) == e);

    Rng rng(2);
    cvec s(9);
    for (int i = 0; i < 9; ++i) s(i) = cplx(rng.normal(), rng.normal());
    const cmat H = lift(s, 5);
    CHECK((hankel_project(H) - H).norm() < 1e-14);

    // best Hankel approximation in Frobenius norm
    const cmat R = random_matrix(5, 5, rng);
    const double best = (R - hankel_project(R)).norm();
    for (int t = 0; t < 100; ++t) {
        cvec h(9);
        for (int i = 0; i < 9; ++i) h(i) = cplx(rng.normal(), rng.normal());
        CHECK(best <= (R - lift(h, 5)).norm() + 1e-12);
    }

    cmat near = H;
    near(0, 1) += 1e-12;
    CHECK((antidiag_extract(near) - antidiag_mean(near)).norm() < 1e-15);
    cmat far = H;
    far(0, 1) += 1.0;
    CHECK_THROWS(antidiag_extract(far));
}

TEST_CASE("antidiag weights") {
    const rvec w = antidiag_weights(3);
    REQUIRE(w.size() == 5);
    CHECK(w(0) == 1);
    CHECK(w(2) == 3);
    CHECK(w(4) == 1);
}

TEST_CASE("truncated svd") {
    cmat D = cmat::Zero(3, 3);
    D(0, 0) = 3;
    D(1, 1) = 2;
    D(2, 2) = 1;
    cmat expect = D;
    expect(2, 2) = 0;
    CHECK((truncated_svd(D, 2).Mr - expect).norm() < 1e-12);

    Rng rng(3);
    const cmat low = random_matrix(6, 2, rng) * random_matrix(2, 6, rng);
    CHECK((truncated_svd(low, 2).Mr - low).norm() < 1e-10 * low.norm());

    const cmat M = random_matrix(6, 6, rng);
    const rvec sv = Eigen::JacobiSVD<cmat>(M).singularValues();
    for (int r = 0; r <= 6; ++r) {
        double tail = 0;
        for (int i = r; i < 6; ++i) tail += sv(i) * sv(i);
        CHECK((M - truncated_svd(M, r).Mr).squaredNorm() == doctest::Approx(tail).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("numerical and theoretical rank") {
    CHECK(numerical_rank(cmat::Identity(3, 3), 1e-8) == 3);
    CHECK(numerical_rank(cmat::Zero(3, 3), 1e-8) == 0);
    CHECK(theoretical_rank(3, 0) == 2);
    CHECK(theoretical_rank(3, 1) == 3);
    CHECK(theoretical_rank(1, 0) == 1);
    CHECK(theoretical_rank(5, 0) == 3);

    const auto ch = channel_sequences(monotone_measurements(300, 8), 3);
    REQUIRE(ch.size() == 5);
    CHECK(ch[0].K == 150);
    CHECK(ch[0].sequence.size() == 299);
    CHECK(numerical_rank(lift(ch[0].sequence, 150), 1e-8) == 2);
    for (int j = 1; j < 5; ++j) CHECK(numerical_rank(lift(ch[j].sequence, 150), 1e-8) == 3);
}

TEST_CASE("channel sequences match the closed form") {
    Rng rng(13);
    const Spectrum spec = generate_symmetric_spectrum(15, rng);
    const rvec x0 = random_initial_state(15, rng);
    const rmat Y = measure(generate_orbit(spec, x0, 40), 3).clean;
    const auto ch = channel_sequences(Y, 3, 20);
    const cvec f = dft(x0.cast<cplx>());
    for (int j = 0; j < 5; ++j) {
        CHECK(ch[j].theoretical_rank == theoretical_rank(3, j));
        for (int l = 0; l < 39; ++l) {
            cplx s = 0;
            for (int n = 0; n < 3; ++n) s += std::pow(spec.values(j + 5 * n), l) * f(j + 5 * n) / 3.0;
            CHECK(std::abs(ch[j].sequence(l) - s) < 1e-12);
        }
    }

    rmat single(1, 6);
    single << 1, 2, 3, 4, 5, 6;
    const auto one = channel_sequences(single, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].sequence(4) == cplx(5.0));
}

TEST_CASE("incoherence and condition number") {
    CHECK(compute_incoherence({1.0}, 4) == doctest::Approx(1.0));
    CHECK(compute_incoherence({1.0, -1.0}, 2) == doctest::Approx(1.0));
    // Gram [[2,1.5],[1.5,1.25]]: smallest eigenvalue (13 - sqrt(153)) / 8
    const double lmin = (3.25 - std::sqrt(3.25 * 3.25 - 4 * (2.5 - 2.25))) / 2;
    CHECK(compute_incoherence({1.0, 0.5}, 2) == doctest::Approx(2.0 / lmin));
    CHECK(compute_incoherence({1.0, 0.5}, 2) == doctest::Approx(25.4).epsilon(0.01));

    Rng rng(4);
    const cmat Q = Eigen::HouseholderQR<cmat>(random_matrix(4, 4, rng)).householderQ();
    CHECK(condition_number(Q, 4) == doctest::Approx(1.0));
    cmat D = cmat::Zero(2, 2);
    D(0, 0) = 4;
    D(1, 1) = 2;
    CHECK(condition_number(D, 2) == doctest::Approx(2.0));
}

TEST_CASE("fast rank projector agrees with the dense projection") {
    const auto ch = channel_sequences(monotone_measurements(120, 5), 3);
    Rng rng(6);
    cvec s = ch[1].sequence;
    for (int l = 0; l < s.size(); ++l) s(l) += 1e-3 * cplx(rng.normal(), rng.normal());
    const cvec dense = antidiag_mean(truncated_svd(lift(s, 60), 3).Mr);

    HankelRankProjector fast(60, 3);
    cvec approx;
    for (int t = 0; t < 20; ++t) approx = fast.project(s);
    CHECK((approx - dense).norm() <= 1e-8 * dense.norm());

    HankelRankProjector exact(60, 3, true);
    CHECK((exact.project(s) - dense).norm() <= 1e-12 * dense.norm());
    CHECK(exact.next_singular_value() > 0.0);
}
