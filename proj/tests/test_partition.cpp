#include "trirank/errors.hpp"
#include "trirank/partition.hpp"

#include <doctest.h>

using trirank::Partition;

TEST_CASE("conjugate is an involution and preserves size") {
    for (int n = 0; n <= 9; ++n) {
        const auto all = n == 0 ? std::vector<Partition>{Partition()} : trirank::partitions_of(n);
        for (const auto& l : all) {
            const Partition c = trirank::conjugate(l);
            CHECK(trirank::conjugate(c) == l);
            CHECK(c.size() == l.size());
            // λ'_i counts the parts that are at least i
            for (int i = 1; i <= l.largest(); ++i) {
                int count = 0;
                for (int part : l.parts()) count += part >= i;
                CHECK(c[static_cast<std::size_t>(i - 1)] == count);
            }
        }
    }
}

TEST_CASE("partition counts match the partition numbers") {
    const int expected[] = {1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
    for (int n = 1; n <= 10; ++n) CHECK(trirank::partitions_of(n).size() == static_cast<std::size_t>(expected[n - 1]));
}

TEST_CASE("parsing and construction") {
    CHECK(Partition::parse("3,1,1").parts() == std::vector<int>{3, 1, 1});
    CHECK(Partition::parse(" 2 , 2 ").parts() == std::vector<int>{2, 2});
    CHECK(Partition::parse("").empty());
    CHECK(Partition::parse("0").empty());
    CHECK(Partition::parse("4,2").to_string() == "4,2");
    CHECK(Partition::from_unsorted({1, 0, 3, 2}).parts() == std::vector<int>{3, 2, 1});
    CHECK_THROWS_AS(Partition::parse("1,2"), trirank::ValidationError);
    CHECK_THROWS_AS(Partition::parse("a"), trirank::ValidationError);
    CHECK_THROWS_AS(Partition::parse("2,,1"), trirank::ValidationError);
    CHECK_THROWS_AS(Partition({2, 0}), trirank::ValidationError);
}

TEST_CASE("accessors") {
    const Partition l({4, 2, 2, 1});
    CHECK(l.size() == 9);
    CHECK(l.length() == 4);
    CHECK(l.largest() == 4);
    CHECK(l[7] == 0);
    CHECK(trirank::group_order_exponent(l) == 9);
    CHECK(trirank::conjugate(l).parts() == std::vector<int>{4, 3, 1, 1});
}
