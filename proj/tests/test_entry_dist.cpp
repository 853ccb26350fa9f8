#include "trirank/entry_dist.hpp"
#include "trirank/errors.hpp"
#include "trirank/oracles.hpp"
#include "trirank/rng.hpp"

#include <cmath>
#include <map>

#include <doctest.h>

using namespace trirank;

TEST_CASE("parsing the textual forms") {
    const EntryDist a = EntryDist::parse("0:1, 1:3", 2, 1);
    CHECK(a.support() == std::vector<std::pair<u64, double>>{{0, 0.25}, {1, 0.75}});
    CHECK(a.prob_divisible_by_p() == doctest::Approx(0.25));

    const EntryDist s = EntryDist::parse("symmetric:alpha=0.6", 3, 4);
    CHECK(s.precision() == 1);
    CHECK(s.prob_divisible_by_p() == doctest::Approx(0.6));
    CHECK(s.support()[1].second == doctest::Approx(0.2));

    const EntryDist u = EntryDist::parse("uniform", 5, 3);
    CHECK(u.is_uniform());
    CHECK(u.modulus().value() == 125);
    CHECK(u.prob_divisible_by_p() == doctest::Approx(0.2));

    CHECK_THROWS_AS(EntryDist::parse("0:1", 2, 1), ValidationError);
    CHECK_THROWS_AS(EntryDist::parse("1:1,3:1", 2, 2), ValidationError);
    CHECK_THROWS_AS(EntryDist::parse("4:1,1:1", 2, 2), ValidationError);
    CHECK_THROWS_AS(EntryDist::parse("0:1,1:-1", 2, 1), ValidationError);
    CHECK_THROWS_AS(EntryDist::parse("0:1,", 2, 1), ValidationError);
    CHECK_THROWS_AS(EntryDist::parse("symmetric:alpha=1", 2, 1), ValidationError);
    CHECK_THROWS_AS(EntryDist::parse("uniform", 6, 1), ValidationError);
    CHECK_THROWS_AS(EntryDist::uniform(2, 62), ValidationError);
}

TEST_CASE("equal weights on every residue are recognized as uniform") {
    CHECK(EntryDist::symmetric(2, 0.5).is_uniform());
    CHECK(EntryDist::symmetric(3, 1.0 / 3).is_uniform());
    CHECK_FALSE(EntryDist::symmetric(3, 0.5).is_uniform());
    CHECK(EntryDist::parse("0:1,1:1,2:1,3:1", 2, 2).is_uniform());
}

TEST_CASE("reduction and lifting preserve the law mod p^k") {
    const EntryDist d(3, 2, {{0, 0.1}, {1, 0.2}, {4, 0.3}, {8, 0.4}});
    const EntryDist r = d.reduced(1);
    const auto sr = r.support();
    REQUIRE(sr.size() == 3);
    CHECK(sr[0].second == doctest::Approx(0.1));
    CHECK(sr[1].second == doctest::Approx(0.5));
    CHECK(sr[2].second == doctest::Approx(0.4));

    const EntryDist lifted = d.at_precision(3);
    CHECK(lifted.precision() == 3);
    CHECK(lifted.support().size() == 12);
    std::map<u64, double> back;
    for (auto [x, q] : lifted.support()) back[x % 9] += q;
    for (auto [x, q] : d.support()) CHECK(back[x] == doctest::Approx(q));
    const auto round_trip = lifted.reduced(2).support();
    REQUIRE(round_trip.size() == d.support().size());
    for (std::size_t i = 0; i < round_trip.size(); ++i) {
        CHECK(round_trip[i].first == d.support()[i].first);
        CHECK(round_trip[i].second == doctest::Approx(d.support()[i].second));
    }
    CHECK(EntryDist::uniform(2, 1).at_precision(5).is_uniform());
}

TEST_CASE("sampler frequencies follow the law") {
    const EntryDist d(5, 1, {{0, 0.5}, {2, 0.3}, {4, 0.2}});
    EntrySampler draw(d);
    Rng rng(11);
    std::map<u64, int> seen;
    const int trials = 200000;
    for (int i = 0; i < trials; ++i) ++seen[draw(rng)];
    CHECK(seen.size() == 3);
    CHECK(seen[0] / double(trials) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(seen[2] / double(trials) == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("tau by characters matches convolution") {
    const std::vector<std::pair<EntryDist, Partition>> cases{
        {EntryDist(2, 2, {{0, 0.3}, {1, 0.1}, {2, 0.4}, {3, 0.2}}), Partition({2, 1})},
        {EntryDist(3, 2, {{0, 0.5}, {3, 0.25}, {7, 0.25}}), Partition({2})},
        {EntryDist::symmetric(5, 0.3), Partition({1, 1})},
        {EntryDist::uniform(2, 3), Partition({3, 1})},
    };
    Rng rng(5);
    for (const auto& [law, group] : cases) {
        const CharacterTable table(law, group);
        for (int t = 0; t < 40; ++t) {
            std::vector<std::size_t> v(1 + rng() % 5);
            for (auto& x : v) x = rng() % table.order();
            CHECK(tau(table, v) == doctest::Approx(tau_by_convolution(law, group, v)).epsilon(1e-12));
        }
    }
}

TEST_CASE("vanishing probabilities form a distribution") {
    const EntryDist law(3, 1, {{0, 0.2}, {1, 0.7}, {2, 0.1}});
    const CharacterTable table(law, Partition({1, 1}));
    const std::vector<std::size_t> v{1, 4, 3};
    double total = 0;
    for (std::size_t g = 0; g < table.order(); ++g) total += vanishing_probability(table, v, g);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vanishing_probability(table, std::vector<std::size_t>{}, 0) == doctest::Approx(1.0));
}

TEST_CASE("the accumulator reports tau of every prefix") {
    const EntryDist law = EntryDist::symmetric(3, 0.6);
    const Partition group({1});
    const CharacterTable table(law, group);
    TauAccumulator acc(table);
    const std::vector<std::size_t> v{0, 2, 1, 0, 1};
    for (std::size_t i = 1; i <= v.size(); ++i) {
        const double got = acc.push(v[i - 1]);
        CHECK(got == doctest::Approx(tau_by_convolution(law, group, std::span(v).first(i))).epsilon(1e-12));
    }
    CHECK(acc.length() == v.size());
    acc.reset();
    CHECK(acc.value() == doctest::Approx(1.0));
}

TEST_CASE("spectral gap") {
    // uniform mod p: every nontrivial character averages to 0
    CHECK(CharacterTable(EntryDist::uniform(3, 1), Partition({1})).spectral_gap() == doctest::Approx(0.0).epsilon(1e-12));
    const double gap = CharacterTable(EntryDist::symmetric(2, 0.75), Partition({1})).spectral_gap();
    CHECK(gap == doctest::Approx(0.5));
    CHECK_THROWS_AS(CharacterTable(EntryDist::symmetric(2, 0.75), Partition({2})), ValidationError);
}
