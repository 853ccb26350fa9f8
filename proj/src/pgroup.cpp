#include "trirank/pgroup.hpp"

#include "trirank/errors.hpp"
#include "trirank/local_smith.hpp"

#include <boost/integer/mod_inverse.hpp>

#include <algorithm>
#include <mutex>
#include <set>
#include <utility>

#include <fmt/format.h>

namespace trirank {

namespace {

// Z/p^e with arbitrary-size e, for typing subgroups of large groups.
class BigLocalRing {
public:
    using value_type = BigInt;

    BigLocalRing(u64 p, int e) : p_(p), e_(e), value_(boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e))) {}

    int exponent() const { return e_; }
    BigInt reduce(const BigInt& x) const {
        BigInt r = x % value_;
        if (r < 0) r += value_;
        return r;
    }
    BigInt add(const BigInt& a, const BigInt& b) const { return reduce(a + b); }
    BigInt sub(const BigInt& a, const BigInt& b) const { return reduce(a - b); }
    BigInt mul(const BigInt& a, const BigInt& b) const { return reduce(a * b); }

    int valuation(BigInt x) const {
        x = reduce(x);
        if (x == 0) return e_;
        int v = 0;
        while (x % p_ == 0) {
            x /= p_;
            ++v;
        }
        return v;
    }

    BigInt divide(const BigInt& dividend, const BigInt& divisor) const {
        const int vn = valuation(dividend);
        const int vd = valuation(divisor);
        if (vn < vd) throw NumericalError("division by an element of larger valuation");
        if (vn >= e_) return 0;
        const BigInt pd = boost::multiprecision::pow(BigInt(p_), static_cast<unsigned>(vd));
        const BigInt pn = boost::multiprecision::pow(BigInt(p_), static_cast<unsigned>(vn));
        const BigInt un = reduce(dividend) / pn;
        const BigInt ud = reduce(divisor) / pd;
        const BigInt inv = boost::integer::mod_inverse(ud, value_);
        const BigInt quotient_mod = value_ / pd;
        return (un * inv % value_) * (pn / pd) % quotient_mod;
    }

private:
    u64 p_;
    int e_;
    BigInt value_;
};

BigInt big_pow(u64 p, int k) { return boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k)); }

} // namespace

AbelianPGroup::AbelianPGroup(const Partition& type, u64 p) : type_(type), p_(p) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    for (int part : type.parts()) {
        u64 m = 0;
        if (!checked_pow(p, part, u64{1} << 40, m)) {
            throw ResourceError(fmt::format("group Z/{}^{} is too large to enumerate", p, part));
        }
        moduli_.push_back(m);
        if (static_cast<double>(order_) * static_cast<double>(m) > 1e12) {
            throw ResourceError("group is too large to enumerate");
        }
        order_ *= m;
    }
}

std::vector<u64> AbelianPGroup::coordinates(std::size_t index) const {
    std::vector<u64> out(moduli_.size());
    for (std::size_t t = 0; t < moduli_.size(); ++t) {
        out[t] = index % moduli_[t];
        index /= moduli_[t];
    }
    return out;
}

std::size_t AbelianPGroup::index(std::span<const u64> coordinates) const {
    std::size_t idx = 0;
    for (std::size_t t = moduli_.size(); t-- > 0;) idx = idx * moduli_[t] + coordinates[t] % moduli_[t];
    return idx;
}

std::size_t AbelianPGroup::add(std::size_t a, std::size_t b) const {
    std::size_t out = 0, radix = 1;
    for (u64 m : moduli_) {
        out += ((a % m + b % m) % m) * radix;
        a /= m;
        b /= m;
        radix *= m;
    }
    return out;
}

std::size_t AbelianPGroup::scale(u64 r, std::size_t a) const {
    std::size_t out = 0, radix = 1;
    for (u64 m : moduli_) {
        out += static_cast<std::size_t>((static_cast<u128>(r % m) * (a % m)) % m) * radix;
        a /= m;
        radix *= m;
    }
    return out;
}

int AbelianPGroup::order_exponent(std::size_t a) const {
    int best = 0;
    for (std::size_t t = 0; t < moduli_.size(); ++t) {
        u64 x = a % moduli_[t];
        a /= moduli_[t];
        if (x == 0) continue;
        int v = 0;
        while (x % p_ == 0) {
            x /= p_;
            ++v;
        }
        best = std::max(best, type_.parts()[t] - v);
    }
    return best;
}

int hom_count_exponent(const Partition& lambda, const Partition& mu) {
    const Partition lc = conjugate(lambda);
    const Partition mc = conjugate(mu);
    int total = 0;
    for (std::size_t k = 0; k < std::min(lc.length(), mc.length()); ++k) total += lc[k] * mc[k];
    return total;
}

u64 brute_force_hom_count(const Partition& lambda, const Partition& mu, u64 p) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    const int total = lambda.size() + mu.size();
    const int limit = p == 2 ? 8 : p == 3 ? 6 : [&] {
        int l = 0;
        u64 acc = 1;
        while (acc * p <= 729) {
            acc *= p;
            ++l;
        }
        return l;
    }();
    if (total > limit) {
        throw ResourceError(fmt::format("instance too large: |λ| + |μ| = {} exceeds {} for p = {}", total, limit, p));
    }
    const AbelianPGroup target(mu, p);
    const std::size_t r = lambda.length();
    // odometer over all assignments of images to the generators of G_λ
    std::vector<std::size_t> image(r, 0);
    u64 count = 0;
    while (true) {
        bool ok = true;
        for (std::size_t i = 0; i < r && ok; ++i) ok = target.order_exponent(image[i]) <= lambda[i];
        if (ok) ++count;
        std::size_t pos = 0;
        while (pos < r && ++image[pos] == target.order()) image[pos++] = 0;
        if (pos == r) break;
    }
    return count;
}

Partition index_p_kernel_type(const Partition& lambda, std::span<const u64> functional, u64 p) {
    const std::size_t r = lambda.length();
    require(functional.size() == r, "functional must have one coordinate per summand");
    std::size_t lead = r;
    for (std::size_t t = 0; t < r; ++t) {
        if (functional[t] % p != 0) {
            lead = t;
            break;
        }
    }
    require(lead < r, "functional must be nonzero mod p");
    const Modulus field(p, 1);
    const u64 inv = field.inverse_unit(functional[lead] % p);

    // The preimage lattice of ker(f) in Z^r has basis b_j = e_j - c_j e_lead
    // (j != lead) and b_lead = p e_lead. Relations p^{λ_j} e_j rewritten in
    // that basis give the presentation below (columns are relations).
    BigLocalRing ring(p, lambda.largest());
    BasicMatrix<BigInt> rel(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        const int part = lambda[j];
        if (j == lead) {
            rel(lead, lead) = big_pow(p, part - 1);
            continue;
        }
        const u64 c = field.mul(functional[j] % p, inv);
        rel(j, j) = big_pow(p, part);
        rel(lead, j) = BigInt(c) * big_pow(p, part - 1);
    }
    std::vector<int> vals = local_smith_valuations(std::move(rel), ring);
    return Partition::from_unsorted(std::move(vals));
}

std::map<Partition, BigInt> index_p_subgroup_types(const Partition& lambda, u64 p) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    std::map<Partition, BigInt> out;
    const auto& parts = lambda.parts();
    std::size_t i = 0;
    while (i < parts.size()) {
        const int k = parts[i];
        std::size_t j = i;
        while (j < parts.size() && parts[j] == k) ++j;
        const int multiplicity = static_cast<int>(j - i);
        const int above = static_cast<int>(i);
        // functionals whose support meets a part of size k and no smaller part
        BigInt count = (big_pow(p, multiplicity) - 1) / (p - 1) * big_pow(p, above);
        std::vector<u64> rep(parts.size(), 0);
        for (std::size_t t = 0; t < j; ++t) rep[t] = 1;
        out[index_p_kernel_type(lambda, rep, p)] += count;
        i = j;
    }
    return out;
}

std::map<Partition, BigInt> enumerate_index_p_subgroups(const Partition& lambda, u64 p) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    const std::size_t r = lambda.length();
    u64 total = 0;
    if (!checked_pow(p, static_cast<int>(r), 1'000'001, total)) {
        throw ResourceError("instance too large: too many functionals to enumerate");
    }
    std::map<Partition, BigInt> out;
    std::vector<u64> c(r, 0);
    for (std::size_t lead = 0; lead < r; ++lead) {
        // first nonzero coordinate is 1 at `lead`; coordinates after it are free
        std::fill(c.begin(), c.end(), 0);
        c[lead] = 1;
        while (true) {
            out[index_p_kernel_type(lambda, c, p)] += 1;
            std::size_t pos = lead + 1;
            while (pos < r && ++c[pos] == p) c[pos++] = 0;
            if (pos == r) break;
        }
    }
    return out;
}

BigInt maximal_chain_count(const Partition& lambda, u64 p) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    static std::mutex memo_mutex;
    static std::map<std::pair<u64, Partition>, BigInt> memo;

    if (lambda.empty()) return 1;
    const auto key = std::make_pair(p, lambda);
    {
        std::lock_guard lock(memo_mutex);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    BigInt total = 0;
    for (const auto& [sub, count] : index_p_subgroup_types(lambda, p)) {
        total += count * maximal_chain_count(sub, p);
    }
    std::lock_guard lock(memo_mutex);
    memo.emplace(key, total);
    return total;
}

BigInt brute_force_maximal_chains(const Partition& lambda, u64 p) {
    const AbelianPGroup group(lambda, p);
    const std::size_t order = group.order();
    if (order > 4096) throw ResourceError(fmt::format("instance too large: |G| = {} exceeds 2^12", order));
    const std::size_t words = (order + 63) / 64;
    using Bits = std::vector<u64>;
    auto test = [](const Bits& b, std::size_t x) { return (b[x / 64] >> (x % 64)) & 1; };
    auto put = [](Bits& b, std::size_t x) { b[x / 64] |= u64{1} << (x % 64); };

    // all subgroups, discovered by adjoining one element at a time
    std::vector<Bits> subgroups;
    std::set<Bits> seen;
    Bits trivial(words, 0);
    put(trivial, 0);
    subgroups.push_back(trivial);
    seen.insert(trivial);
    constexpr std::size_t kMaxSubgroups = 20000;
    for (std::size_t s = 0; s < subgroups.size(); ++s) {
        for (std::size_t g = 1; g < order; ++g) {
            if (test(subgroups[s], g)) continue;
            std::vector<std::size_t> members;
            for (std::size_t x = 0; x < order; ++x) {
                if (test(subgroups[s], x)) members.push_back(x);
            }
            Bits next(words, 0);
            std::size_t multiple = 0;
            do {
                for (std::size_t h : members) put(next, group.add(h, multiple));
                multiple = group.add(multiple, g);
            } while (multiple != 0);
            if (seen.insert(next).second) {
                subgroups.push_back(std::move(next));
                if (subgroups.size() > kMaxSubgroups) {
                    throw ResourceError("instance too large: subgroup lattice exceeds 20000 nodes");
                }
            }
        }
    }

    auto popcount = [](const Bits& b) {
        std::size_t c = 0;
        for (u64 w : b) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    };
    auto subset = [](const Bits& a, const Bits& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] & ~b[i]) return false;
        }
        return true;
    };
    std::sort(subgroups.begin(), subgroups.end(),
              [&](const Bits& a, const Bits& b) { return popcount(a) < popcount(b); });
    const std::size_t count = subgroups.size();
    std::vector<std::size_t> size(count);
    for (std::size_t i = 0; i < count; ++i) size[i] = popcount(subgroups[i]);

    // chains[k][len]: saturated chains from the trivial group to subgroup k of length len
    const std::size_t max_len = static_cast<std::size_t>(lambda.size());
    std::vector<std::vector<BigInt>> chains(count, std::vector<BigInt>(max_len + 1, 0));
    chains[0][0] = 1;
    for (std::size_t k = 1; k < count; ++k) {
        for (std::size_t h = 0; h < k; ++h) {
            if (size[h] >= size[k] || !subset(subgroups[h], subgroups[k])) continue;
            bool covered = true;
            for (std::size_t m = h + 1; m < k && covered; ++m) {
                if (size[m] > size[h] && size[m] < size[k] && subset(subgroups[h], subgroups[m]) &&
                    subset(subgroups[m], subgroups[k])) {
                    covered = false;
                }
            }
            if (!covered) continue;
            for (std::size_t len = 0; len < max_len; ++len) chains[k][len + 1] += chains[h][len];
        }
    }
    return chains[count - 1][max_len];
}

BigInt complete_flag_count(int k, u64 p) {
    BigInt out = 1;
    for (int i = 1; i <= k; ++i) out *= (big_pow(p, i) - 1) / (p - 1);
    return out;
}

} // namespace trirank
