#pragma once

#include "trirank/modular.hpp"
#include "trirank/partition.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace trirank {

using BigInt = boost::multiprecision::cpp_int;

/// Elements of G_λ = ⊕ Z/p^{λ_i}, encoded as mixed-radix indices with the
/// first summand least significant.
class AbelianPGroup {
public:
    AbelianPGroup(const Partition& type, u64 p);

    const Partition& type() const { return type_; }
    u64 p() const { return p_; }
    std::size_t order() const { return order_; }
    std::size_t rank() const { return moduli_.size(); }
    /// p^{λ_t}
    u64 modulus(std::size_t t) const { return moduli_[t]; }

    std::vector<u64> coordinates(std::size_t index) const;
    std::size_t index(std::span<const u64> coordinates) const;

    std::size_t add(std::size_t a, std::size_t b) const;
    std::size_t scale(u64 r, std::size_t a) const;
    /// Multiplicative order of an element, as an exponent of p.
    int order_exponent(std::size_t a) const;

private:
    Partition type_;
    u64 p_;
    std::vector<u64> moduli_;
    std::size_t order_ = 1;
};

/// e with |Hom(G_λ, G_μ)| = p^e, namely Σ_{i,j} min(λ_i, μ_j) = Σ_k λ'_k μ'_k.
int hom_count_exponent(const Partition& lambda, const Partition& mu);

/// Counts generator assignments G_λ -> G_μ respecting generator orders by
/// enumeration. Guard: |λ| + |μ| <= 8 for p = 2, <= 6 for p = 3, and
/// p^{|λ|+|μ|} <= 729 otherwise; larger instances throw ResourceError.
u64 brute_force_hom_count(const Partition& lambda, const Partition& mu, u64 p);

/// Type of ker(f) for the surjection f: G_λ -> Z/p, f(g) = Σ c_t g_t mod p.
/// `functional` must be nonzero mod p.
Partition index_p_kernel_type(const Partition& lambda, std::span<const u64> functional, u64 p);

/// Index-p subgroups of G_λ grouped by isomorphism type, with multiplicities.
/// Orbit classes of functionals (by the smallest part in their support) are
/// counted in closed form; each class representative is typed by elimination.
std::map<Partition, BigInt> index_p_subgroup_types(const Partition& lambda, u64 p);

/// Same multiset, by typing the kernel of every functional normalized to have
/// first nonzero coordinate 1. Exponential in the number of parts; guarded.
std::map<Partition, BigInt> enumerate_index_p_subgroups(const Partition& lambda, u64 p);

/// MC(G_λ): number of maximal chains 0 < H_1 < ... < H_{|λ|} = G_λ.
/// Takes the type of the group itself; memoized per (p, type), thread-safe.
BigInt maximal_chain_count(const Partition& lambda, u64 p);

/// MC(G_λ) from the explicit subgroup lattice. Requires |G_λ| <= 2^12.
BigInt brute_force_maximal_chains(const Partition& lambda, u64 p);

/// Number of complete flags of F_p^k: Π_{i=1..k} (p^i - 1)/(p - 1).
BigInt complete_flag_count(int k, u64 p);

} // namespace trirank
