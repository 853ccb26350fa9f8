#pragma once

#include "trirank/modular.hpp"
#include "trirank/partition.hpp"

#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trirank {

/// Law of an integer entry ξ, known modulo p^E.
///
/// Stored sparsely as (residue, probability) pairs, except for the uniform law
/// which is kept symbolic so that large p^E stays cheap. Construction enforces
/// 0 < P(p | ξ) < 1.
class EntryDist {
public:
    /// Weights are nonnegative and normalized here; repeated residues accumulate.
    EntryDist(u64 p, int precision, std::vector<std::pair<u64, double>> weights);

    static EntryDist symmetric(u64 p, double alpha);
    static EntryDist uniform(u64 p, int precision);
    /// "r1:w1,r2:w2,...", "symmetric:alpha=A" or "uniform". Residues are
    /// taken mod p^precision; the symmetric form always has precision 1.
    static EntryDist parse(std::string_view text, u64 p, int precision);

    u64 p() const { return p_; }
    int precision() const { return precision_; }
    Modulus modulus() const { return Modulus(p_, precision_); }
    bool is_uniform() const { return uniform_; }

    /// Sorted support with probabilities; materializes the uniform law (guarded).
    std::vector<std::pair<u64, double>> support() const;
    double prob_divisible_by_p() const;

    /// Law of ξ mod p^k for k <= precision.
    EntryDist reduced(int k) const;
    /// Law at precision k. Coarsens when k <= precision; otherwise each residue
    /// is spread uniformly over its p^(k - precision) lifts.
    EntryDist at_precision(int k) const;

    std::string describe() const;

private:
    EntryDist() = default;
    void validate() const;

    u64 p_ = 2;
    int precision_ = 1;
    bool uniform_ = false;
    std::vector<std::pair<u64, double>> weights_;
};

/// Draws residues with the declared probabilities; deterministic given the engine state.
class EntrySampler {
public:
    explicit EntrySampler(const EntryDist& dist);

    template <class Engine>
    u64 operator()(Engine& rng) {
        if (uniform_) return uniform_draw_(rng);
        return residues_[pick_(rng)];
    }

private:
    bool uniform_;
    std::uniform_int_distribution<u64> uniform_draw_;
    std::vector<u64> residues_;
    std::discrete_distribution<std::size_t> pick_;
};

/// Values φ_w(g) = E[ρ_w(ξ g)] for the characters ρ_w of a group H = G_λ.
///
/// ρ_w(g) = exp(2πi Σ_t w_t g_t / p^{λ_t}) only depends on the pairing
/// s(w, g) ∈ Z/p^{λ_1}, so the table is the single transform
/// ψ(s) = E exp(2πi ξ s / p^{λ_1}) plus index arithmetic.
class CharacterTable {
public:
    CharacterTable(const EntryDist& dist, const Partition& group);

    const Partition& group() const { return type_; }
    std::size_t order() const { return order_; }

    /// s(w, g) for element indices (mixed radix, first summand least significant).
    u64 pairing(std::size_t w, std::size_t g) const;
    std::complex<double> phi(std::size_t w, std::size_t g) const { return psi_[pairing(w, g)]; }
    std::complex<double> character(std::size_t w, std::size_t g) const { return roots_[pairing(w, g)]; }

    /// max |φ_ρ(g)| over nontrivial ρ and g outside ker ρ.
    double spectral_gap() const;

private:
    Partition type_;
    u64 p_;
    u64 top_;
    std::size_t order_ = 1;
    std::vector<u64> moduli_;
    std::vector<u64> scale_;
    std::vector<std::complex<double>> psi_;
    std::vector<std::complex<double>> roots_;
};

/// P(Σ ξ_i v_i = target) in H, by the character sum.
double vanishing_probability(const CharacterTable& table, std::span<const std::size_t> v, std::size_t target);
/// τ(v) = P(Σ ξ_i v_i = 0).
double tau(const CharacterTable& table, std::span<const std::size_t> v);
double tau(const EntryDist& dist, const Partition& group, std::span<const std::size_t> v);

/// Running products Π_i φ_w(v_i), one per character; push returns τ of the prefix.
class TauAccumulator {
public:
    explicit TauAccumulator(const CharacterTable& table);

    double push(std::size_t element);
    double value() const;
    std::size_t length() const { return length_; }
    void reset();

private:
    const CharacterTable* table_;
    std::vector<std::complex<double>> products_;
    std::size_t length_ = 0;
};

} // namespace trirank
