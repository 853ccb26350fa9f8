#include "trirank/errors.hpp"
#include "trirank/pgroup.hpp"

#include <doctest.h>

using namespace trirank;

namespace {

// Π_{i=1..k} (p^i - 1)/(p - 1), by plain integer arithmetic
BigInt flags(int k, u64 p) {
    BigInt out = 1;
    BigInt pi = 1;
    for (int i = 1; i <= k; ++i) {
        pi *= p;
        out *= (pi - 1) / (p - 1);
    }
    return out;
}

std::vector<Partition> with_empty(int n) {
    return n == 0 ? std::vector<Partition>{Partition()} : partitions_of(n);
}

} // namespace

TEST_CASE("MC of cyclic and small groups") {
    for (u64 p : {2, 3, 5, 7}) {
        for (int k = 1; k <= 6; ++k) CHECK(maximal_chain_count(Partition({k}), p) == 1);
    }
    CHECK(maximal_chain_count(Partition({1, 1}), 2) == 3);
    CHECK(maximal_chain_count(Partition({1, 1, 1}), 2) == 21);
    CHECK(maximal_chain_count(Partition(), 2) == 1);
}

TEST_CASE("MC of elementary abelian groups counts complete flags") {
    for (u64 p : {2, 3, 5}) {
        for (int k = 1; k <= 6; ++k) {
            const Partition ones(std::vector<int>(static_cast<std::size_t>(k), 1));
            CHECK(maximal_chain_count(ones, p) == flags(k, p));
            CHECK(complete_flag_count(k, p) == flags(k, p));
        }
    }
}

TEST_CASE("MC agrees with the explicit subgroup lattice") {
    for (u64 p : {2, 3}) {
        for (int n = 1; n <= 4; ++n) {
            for (const auto& l : partitions_of(n)) {
                CAPTURE(p);
                CAPTURE(l.to_string());
                CHECK(maximal_chain_count(l, p) == brute_force_maximal_chains(l, p));
            }
        }
    }
    for (const auto& l : partitions_of(5)) CHECK(maximal_chain_count(l, 2) == brute_force_maximal_chains(l, 2));
    CHECK(maximal_chain_count(Partition({2, 1}), 5) == brute_force_maximal_chains(Partition({2, 1}), 5));
}

TEST_CASE("index-p subgroup types: closed form vs enumeration") {
    for (u64 p : {2, 3}) {
        for (int n = 1; n <= 5; ++n) {
            for (const auto& l : partitions_of(n)) {
                CAPTURE(l.to_string());
                const auto fast = index_p_subgroup_types(l, p);
                CHECK(fast == enumerate_index_p_subgroups(l, p));
                // the number of index-p subgroups is (p^r - 1)/(p - 1), r = number of parts
                BigInt total = 0;
                for (const auto& [type, count] : fast) {
                    CHECK(type.size() == l.size() - 1);
                    total += count;
                }
                CHECK(total == flags(static_cast<int>(l.length()), p) / flags(static_cast<int>(l.length()) - 1, p));
            }
        }
    }
}

TEST_CASE("Hom counts: formula vs enumeration") {
    for (u64 p : {2, 3}) {
        const int limit = p == 2 ? 8 : 6;
        for (int a = 0; a <= limit; ++a) {
            for (int b = 0; a + b <= limit; ++b) {
                for (const auto& l : with_empty(a)) {
                    for (const auto& m : with_empty(b)) {
                        u64 expected = 0;
                        REQUIRE(checked_pow(p, hom_count_exponent(l, m), u64{1} << 62, expected));
                        CHECK(brute_force_hom_count(l, m, p) == expected);
                    }
                }
            }
        }
    }
    CHECK(hom_count_exponent(Partition({3, 1}), Partition({2, 2})) == 6);
    CHECK_THROWS_AS(brute_force_hom_count(Partition({5}), Partition({5}), 2), ResourceError);
}

TEST_CASE("group arithmetic") {
    const AbelianPGroup g(Partition({2, 1}), 3);
    CHECK(g.order() == 27);
    CHECK(g.rank() == 2);
    const std::vector<u64> x{4, 2};
    const std::size_t ix = g.index(x);
    CHECK(g.coordinates(ix) == x);
    CHECK(g.order_exponent(ix) == 2);
    CHECK(g.order_exponent(g.scale(3, ix)) == 1);
    CHECK(g.scale(9, ix) == 0);
    CHECK(g.add(ix, g.scale(8, ix)) == 0);
}

TEST_CASE("kernel of a functional") {
    const std::vector<u64> first{1, 0};
    const std::vector<u64> second{0, 1};
    CHECK(index_p_kernel_type(Partition({2, 1}), first, 2) == Partition({1, 1}));
    CHECK(index_p_kernel_type(Partition({2, 1}), second, 2) == Partition({2}));
}
