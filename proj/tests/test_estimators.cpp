#include "trirank/errors.hpp"
#include "trirank/estimators.hpp"
#include "trirank/theory.hpp"

#include <cmath>

#include <doctest.h>

using namespace trirank;

namespace {

// E #{v in F_p^n : L v = 0 (and v_1 != 0)} by enumerating every matrix and vector
double brute_kernel_moment(u64 p, double alpha, std::size_t n, bool first_nonzero) {
    const std::size_t entries = n * (n + 1) / 2;
    std::size_t matrices = 1;
    for (std::size_t i = 0; i < entries; ++i) matrices *= p;
    std::size_t vectors = 1;
    for (std::size_t i = 0; i < n; ++i) vectors *= p;
    const double nonzero = (1 - alpha) / static_cast<double>(p - 1);
    double total = 0;
    std::vector<u64> a(entries), v(n);
    for (std::size_t code = 0; code < matrices; ++code) {
        double weight = 1;
        std::size_t c = code;
        for (auto& x : a) {
            x = c % p;
            c /= p;
            weight *= x == 0 ? alpha : nonzero;
        }
        std::size_t kernel = 0;
        for (std::size_t vc = 0; vc < vectors; ++vc) {
            std::size_t r = vc;
            for (auto& x : v) {
                x = r % p;
                r /= p;
            }
            if (first_nonzero && v[0] == 0) continue;
            bool zero = true;
            std::size_t k = 0;
            for (std::size_t i = 0; i < n && zero; ++i) {
                u64 s = 0;
                for (std::size_t j = 0; j <= i; ++j) s += a[k + j] * v[j];
                k += i + 1;
                zero = s % p == 0;
            }
            kernel += zero;
        }
        total += weight * static_cast<double>(kernel);
    }
    return total;
}

} // namespace

TEST_CASE("exact symmetric moment matches enumeration") {
    for (auto [p, n] : {std::pair<u64, std::size_t>{2, 1}, {2, 2}, {2, 4}, {3, 3}, {5, 2}}) {
        for (double alpha : {0.2, 0.5, 0.75}) {
            CAPTURE(p);
            CAPTURE(n);
            CAPTURE(alpha);
            CHECK(exact_moment_symmetric(p, alpha, n) == doctest::Approx(brute_kernel_moment(p, alpha, n, false)).epsilon(1e-12));
            CHECK(exact_moment_symmetric(p, alpha, n, true) == doctest::Approx(brute_kernel_moment(p, alpha, n, true)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(exact_moment_symmetric(2, 0.5, 200000), ValidationError);
}

TEST_CASE("chi0 estimator for p = 2 is exact") {
    for (double alpha : {0.5, 0.75, 0.3}) {
        const EstimateResult r = estimate_chi0(EntryDist::symmetric(2, alpha), 1000, 1000, 3);
        CHECK(r.std_error == 0.0);
        CHECK(r.estimate == doctest::Approx(chi0_symmetric(2, alpha)).epsilon(1e-12));
        CHECK(r.diagnostics.at("mean_absorption_depth") < 1000);
    }
}

TEST_CASE("chi0 estimator agrees with the finite-n exact value") {
    // at n = 40 the symmetric law is already absorbed, so both match the closed form
    const double target = exact_moment_symmetric(3, 0.5, 40, true);
    CHECK(target == doctest::Approx(chi0_symmetric(3, 0.5)).epsilon(1e-9));
    const EstimateResult c = estimate_chi0(EntryDist::symmetric(3, 0.5), 40, 20000, 11);
    CHECK(std::fabs(c.estimate - target) < 4 * c.std_error + 1e-12);
    const EstimateResult p = estimate_chi0(EntryDist::symmetric(3, 0.5), 40, 40000, 12, Chi0Method::plain);
    CHECK(std::fabs(p.estimate - target) < 4 * p.std_error);
    CHECK(p.diagnostics.at("method_plain") == 1.0);
}

TEST_CASE("chi0 estimator for a non-symmetric law") {
    const EntryDist law(3, 1, {{0, 0.2}, {1, 0.5}, {2, 0.3}});
    const EstimateResult c = estimate_chi0(law, 300, 20000, 5);
    const EstimateResult p = estimate_chi0(law, 300, 200000, 6, Chi0Method::plain);
    CHECK(c.estimate > 0);
    CHECK(std::isfinite(c.estimate));
    CHECK(std::fabs(c.estimate - p.estimate) < 4 * std::hypot(c.std_error, p.std_error));
    CHECK_THROWS_AS(estimate_chi0(EntryDist::uniform(3, 2), 10, 10, 1), ValidationError);
    CHECK_THROWS_AS(estimate_chi0(law, 10, 1, 1), ValidationError);
}

TEST_CASE("chi0 estimates do not depend on the worker count") {
    const EntryDist law(5, 1, {{0, 0.4}, {1, 0.3}, {3, 0.3}});
    const EstimateResult a = estimate_chi0(law, 200, 3000, 9, Chi0Method::conditioned, 1);
    const EstimateResult b = estimate_chi0(law, 200, 3000, 9, Chi0Method::conditioned, 3);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("Hom moments") {
    const EntryDist law = EntryDist::symmetric(2, 0.75);
    CHECK(estimate_hom_moment(law, Partition(), 10, 10, 1).estimate == 1.0);
    const std::size_t n = 48;
    const EstimateResult r = estimate_hom_moment(law, Partition({1}), n, 6000, 4);
    const double exact = exact_moment_symmetric(2, 0.75, n) / static_cast<double>(n);
    CHECK(std::fabs(r.estimate - exact) < 4 * r.std_error);
    const EstimateResult again = estimate_hom_moment(law, Partition({1}), n, 6000, 4, 3);
    CHECK(again.estimate == r.estimate);
    CHECK_THROWS_AS(estimate_hom_moment(law, Partition({1}), 100000, 100000, 1), ResourceError);
}

TEST_CASE("simulation cost") {
    CHECK(simulation_cost(2, 64, 10) == doctest::Approx(640.0));
    CHECK(simulation_cost(3, 64, 10) == doctest::Approx(40960.0));
    CHECK_NOTHROW(check_budget(3, 100, 100, 1e6));
    CHECK_THROWS_AS(check_budget(3, 100, 101, 1e6), ResourceError);
}
