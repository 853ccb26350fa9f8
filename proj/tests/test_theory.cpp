#include "trirank/errors.hpp"
#include "trirank/theory.hpp"

#include <cmath>

#include <doctest.h>

using namespace trirank;

TEST_CASE("chi0 of the symmetric law") {
    for (u64 p : {2, 3, 5, 7, 11}) {
        CHECK(std::fabs(chi0_symmetric(p, 1.0 / static_cast<double>(p)) - (p - 1.0) / p) < 1e-14);
    }
    SeriesDiagnostics diag;
    const double v = chi0_symmetric(2, 0.75, &diag);
    // partial products of (p-1) β_i / (p - β_i) with β_i = 1 + 2^-i, directly
    long double direct = 0.5L;
    for (int i = 1; i < 200; ++i) {
        const long double beta = 1 + std::pow(0.5L, i);
        direct *= beta / (2 - beta);
    }
    CHECK(v == doctest::Approx(static_cast<double>(direct)).epsilon(1e-14));
    CHECK(diag.terms > 10);
    CHECK(diag.tail_bound < 1e-15);
    CHECK_THROWS_AS(chi0_symmetric(2, 1.0), ValidationError);
    CHECK_THROWS_AS(chi0_symmetric(4, 0.5), ValidationError);
}

TEST_CASE("centering and zeta") {
    CHECK(centering(2, 1, 0) == 0);
    CHECK(centering(2, 4096, 0) == 12);
    CHECK(centering(3, 243, 0.49) == 5);
    CHECK(centering(3, 243, 0.5) == 6);
    CHECK(centering(2, 3, 0) == 2); // log2 3 = 1.58
    CHECK(zeta_from_n(2, 4096) == 0.0);
    CHECK(zeta_from_n(2, 3) == doctest::Approx(2 - std::log2(3.0)));
    // with the derived ζ, log_p n + ζ is an integer and the centering is exact
    CHECK(centering(2, 3, zeta_from_n(2, 3)) == 2);
    CHECK(centering(5, 100, zeta_from_n(5, 100)) == 3);
    CHECK(chi_from_zeta(2, 0.5, 0) == doctest::Approx(0.5));
    CHECK(chi_from_zeta(3, 0.6, 1) == doctest::Approx(0.1));
    CHECK(make_theory_params(2, 1, 0.25, 0.5).chi == doctest::Approx(0.5 * std::pow(2.0, -0.25)));
}

TEST_CASE("pmf normalizes and reproduces the cyclic moments") {
    for (u64 p : {2, 3, 5}) {
        for (double chi : {0.1, 0.5, 2.0}) {
            double mass = 0;
            double m[4] = {0, 0, 0, 0};
            for (std::int64_t x = -40; x <= 40; ++x) {
                const double v = pmf_L1(p, chi, x);
                CHECK(v >= 0);
                mass += v;
                for (int k = 1; k <= 3; ++k) m[k] += std::pow(static_cast<double>(p), k * x) * v;
            }
            CAPTURE(p);
            CAPTURE(chi);
            CHECK(std::fabs(mass - 1) < 1e-10);
            for (int k = 1; k <= 3; ++k) CHECK(m[k] == doctest::Approx(moment_Ld(p, chi, Partition({k}))).epsilon(1e-6));
        }
    }
}

TEST_CASE("pmf diagnostics and the far right tail") {
    SeriesDiagnostics diag;
    const double far = pmf_L1(2, 0.5, 60, &diag);
    CHECK(far == 0.0);
    CHECK(diag.underflow);
    CHECK(diag.precision_bits > 128);
    const double near = pmf_L1(2, 0.5, 8, &diag);
    CHECK(near > 0);
    CHECK_FALSE(diag.underflow);
    CHECK_THROWS_AS(pmf_L1(2, -1, 0), ValidationError);
    CHECK_THROWS_AS(pmf_L1(9, 1, 0), ValidationError);
}

TEST_CASE("moments of the limit law") {
    CHECK(moment_Ld(2, 0.5, Partition()) == 1.0);
    CHECK(moment_Ld(3, 0.7, Partition({1})) == doctest::Approx(1.4));
    // λ = (1,1): λ' = (2), cyclic, MC = 1
    CHECK(moment_Ld(2, 0.5, Partition({1, 1})) == doctest::Approx(0.125));
    // λ = (2): λ' = (1,1), MC = p + 1
    CHECK(moment_Ld(2, 0.5, Partition({2})) == doctest::Approx(0.375));
    // λ = (2,1): λ' = (2,1); Z/9 + Z/3 has one socle line with quotient (Z/3)^2 (4 chains) and
    // three with cyclic quotient (1 chain each), so MC = 7
    CHECK(moment_Ld(3, 1.0, Partition({2, 1})) == doctest::Approx(std::pow(2.0, 3) / 6 * 7));
}
