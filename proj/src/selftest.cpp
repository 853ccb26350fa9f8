#include "trirank/selftest.hpp"

#include "trirank/entry_dist.hpp"
#include "trirank/oracles.hpp"
#include "trirank/pgroup.hpp"
#include "trirank/plinalg.hpp"
#include "trirank/rng.hpp"
#include "trirank/row_sampler.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <fmt/format.h>

namespace trirank {

namespace {

struct Check {
    int cases = 0;
    std::string first_failure;

    void expect(bool ok, const std::string& what) {
        ++cases;
        if (!ok && first_failure.empty()) first_failure = what;
    }
};

bool report(std::ostream& out, const std::string& name, const Check& c) {
    const bool ok = c.first_failure.empty() && c.cases > 0;
    out << fmt::format("{} {} ({} cases){}\n", ok ? "PASS" : "FAIL", name, c.cases,
                       ok ? "" : ": " + c.first_failure);
    return ok;
}

Check check_mc() {
    Check c;
    for (u64 p : {2, 3}) {
        for (int size = 1; size <= 4; ++size) {
            for (const auto& l : partitions_of(size)) {
                const BigInt fast = maximal_chain_count(l, p);
                const BigInt slow = brute_force_maximal_chains(l, p);
                c.expect(fast == slow, fmt::format("p={} λ=({}) {} vs {}", p, l.to_string(), fast.str(), slow.str()));
            }
        }
    }
    return c;
}

Check check_hom() {
    Check c;
    for (u64 p : {2, 3, 5}) {
        const int limit = p == 2 ? 8 : p == 3 ? 6 : 4;
        for (int a = 0; a <= limit; ++a) {
            for (int b = 0; a + b <= limit; ++b) {
                const auto ls = a == 0 ? std::vector<Partition>{Partition()} : partitions_of(a);
                const auto ms = b == 0 ? std::vector<Partition>{Partition()} : partitions_of(b);
                for (const auto& l : ls) {
                    for (const auto& m : ms) {
                        u64 expected = 0;
                        if (!checked_pow(p, hom_count_exponent(l, m), u64{1} << 62, expected)) continue;
                        if (p == 5 && a + b > 4) continue;
                        const u64 brute = brute_force_hom_count(l, m, p);
                        c.expect(brute == expected, fmt::format("p={} ({}) -> ({}): {} vs {}", p, l.to_string(),
                                                                m.to_string(), brute, expected));
                    }
                }
            }
        }
    }
    return c;
}

Check check_smith(const SelftestOptions& opt) {
    Check c;
    Rng rng = make_stream(opt.seed, 1);
    const u64 primes[] = {2, 3, 5};
    for (int t = 0; t < opt.snf_matrices; ++t) {
        const u64 p = primes[t % 3];
        const int e = 1 + t % 4;
        const std::size_t n = 1 + static_cast<std::size_t>(rng() % 8);
        const TriMatrix m = sample_matrix(valuation_heavy_law(p, e), n, rng);
        const CokernelType fast = invariant_valuations(m);
        const CokernelType slow = exact_cokernel_type(m);
        c.expect(fast == slow, fmt::format("p={} E={} n={} matrix #{}", p, e, n, t));
    }
    return c;
}

Check check_tau(const SelftestOptions& opt) {
    Check c;
    Rng rng = make_stream(opt.seed, 2);
    const std::vector<std::pair<u64, Partition>> groups{
        {2, Partition({1})}, {2, Partition({2})}, {2, Partition({1, 1})}, {2, Partition({2, 1})},
        {3, Partition({1})}, {3, Partition({2})}, {3, Partition({1, 1})}, {5, Partition({1})},
    };
    for (int t = 0; t < opt.tau_vectors; ++t) {
        const auto& [p, group] = groups[static_cast<std::size_t>(t) % groups.size()];
        const EntryDist law = valuation_heavy_law(p, group.largest());
        const CharacterTable table(law, group);
        std::vector<std::size_t> v(1 + rng() % 6);
        for (auto& x : v) x = rng() % table.order();
        const double fast = tau(table, v);
        const double slow = tau_by_convolution(law, group, v);
        c.expect(std::fabs(fast - slow) < 1e-12, fmt::format("p={} G=({}) {} vs {}", p, group.to_string(), fast, slow));
    }
    return c;
}

Check check_corank(const SelftestOptions& opt) {
    Check c;
    Rng rng = make_stream(opt.seed, 3);
    for (u64 p : {2, 3, 7}) {
        for (std::size_t n : {1, 2, 5, 63, 64, 65, 130}) {
            const TriMatrix m = sample_matrix(EntryDist::uniform(p, 1), n, rng);
            const std::size_t fast = corank_mod_p(m);
            const std::size_t slow = corank_mod_p_generic(m);
            const CokernelType ct = invariant_valuations(m);
            c.expect(fast == slow && ct.n - ct.count_below(1) == fast,
                     fmt::format("p={} n={}: {} vs {}", p, n, fast, slow));
        }
    }
    return c;
}

} // namespace

int run_selftest(std::ostream& out, const SelftestOptions& options) {
    int failures = 0;
    failures += !report(out, "maximal chain counts vs subgroup lattice", check_mc());
    failures += !report(out, "Hom counts vs enumeration", check_hom());
    failures += !report(out, "Smith valuations vs integer SNF", check_smith(options));
    failures += !report(out, "tau by characters vs convolution", check_tau(options));
    failures += !report(out, "corank fast path vs dense elimination", check_corank(options));
    out << (failures == 0 ? "selftest: all checks passed\n" : fmt::format("selftest: {} check(s) failed\n", failures));
    return failures;
}

} // namespace trirank
