#pragma once

#include "trirank/errors.hpp"
#include "trirank/modular.hpp"
#include "trirank/plinalg.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace trirank {

/// Residue vectors of length n over Z/p^k stored one entry per word.
class GenericBackend {
public:
    using Vec = std::vector<u64>;
    using Row = std::vector<u64>;

    GenericBackend(std::size_t n, const Modulus& mod) : n_(n), mod_(mod), small_(mod.value() < (u64{1} << 32)) {}

    std::size_t n() const { return n_; }
    const Modulus& modulus() const { return mod_; }

    Vec make() const { return Vec(n_, 0); }
    void clear(Vec& v, std::size_t len) const { std::fill_n(v.begin(), len, u64{0}); }

    u64 dot(const Row& row, const Vec& g, std::size_t len) const {
        if (small_) {
            u128 acc = 0;
            for (std::size_t c = 0; c < len; ++c) acc += static_cast<u128>(row[c] * g[c]);
            return static_cast<u64>(acc % mod_.value());
        }
        u64 acc = 0;
        for (std::size_t c = 0; c < len; ++c) {
            if (g[c] != 0) acc = mod_.add(acc, mod_.mul(row[c], g[c]));
        }
        return acc;
    }
    u64 diagonal(const Row& row, std::size_t i) const { return row[i]; }

    void axpy(Vec& dst, u64 m, const Vec& src, std::size_t len) const {
        if (m == 0) return;
        for (std::size_t c = 0; c < len; ++c) {
            if (src[c] != 0) dst[c] = mod_.add(dst[c], mod_.mul(m, src[c]));
        }
    }
    void scale(Vec& v, u64 m, std::size_t len) const {
        for (std::size_t c = 0; c < len; ++c) v[c] = mod_.mul(m, v[c]);
    }
    u64 get(const Vec& v, std::size_t c) const { return v[c]; }
    void set(Vec& v, std::size_t c, u64 value) const { v[c] = mod_.reduce(value); }

private:
    std::size_t n_;
    Modulus mod_;
    bool small_;
};

/// Vectors over Z/2^k stored as k bit planes of ceil(n/64) words each.
///
/// Dot products are Σ_{a+b<k} 2^{a+b} popcount(r_a & g_b); additions use a
/// bitsliced ripple carry across the planes.
class BinaryBackend {
public:
    using Vec = std::vector<u64>;
    using Row = std::vector<u64>;

    BinaryBackend(std::size_t n, const Modulus& mod)
        : n_(n), words_((n + 63) / 64), k_(mod.exponent()), mod_(mod) {
        require(mod.p() == 2, "the bit-plane backend requires p = 2");
    }

    std::size_t n() const { return n_; }
    std::size_t stride() const { return words_; }
    const Modulus& modulus() const { return mod_; }

    Vec make() const { return Vec(words_ * static_cast<std::size_t>(k_), 0); }
    Row make_row() const { return make(); }
    void clear(Vec& v, std::size_t len) const {
        const std::size_t used = used_words(len);
        for (int a = 0; a < k_; ++a) std::fill_n(plane(v, a), used, u64{0});
    }

    u64 dot(const Row& row, const Vec& g, std::size_t len) const {
        const std::size_t used = used_words(len);
        if (k_ == 1) {
            u64 cnt = 0;
            for (std::size_t w = 0; w < used; ++w) cnt += static_cast<u64>(std::popcount(row[w] & g[w]));
            return cnt & 1;
        }
        u64 total = 0;
        for (int a = 0; a < k_; ++a) {
            const u64* r = plane(row, a);
            for (int b = 0; a + b < k_; ++b) {
                const u64* x = plane(g, b);
                u64 cnt = 0;
                for (std::size_t w = 0; w < used; ++w) cnt += static_cast<u64>(std::popcount(r[w] & x[w]));
                total += cnt << (a + b);
            }
        }
        return total & mask();
    }
    u64 diagonal(const Row& row, std::size_t i) const { return get(row, i); }

    void axpy(Vec& dst, u64 m, const Vec& src, std::size_t len) const {
        m &= mask();
        const std::size_t used = used_words(len);
        if (k_ == 1) {
            if (m) {
                for (std::size_t w = 0; w < used; ++w) dst[w] ^= src[w];
            }
            return;
        }
        while (m != 0) {
            const int c = std::countr_zero(m);
            m &= m - 1;
            for (std::size_t w = 0; w < used; ++w) {
                u64 carry = 0;
                for (int a = c; a < k_; ++a) {
                    u64& x = plane(dst, a)[w];
                    const u64 y = plane(src, a - c)[w];
                    const u64 s = x ^ y ^ carry;
                    carry = (x & y) | (carry & (x ^ y));
                    x = s;
                }
            }
        }
    }
    void scale(Vec& v, u64 m, std::size_t len) const {
        m &= mask();
        if (m != 0 && (m & (m - 1)) == 0) {
            shift(v, std::countr_zero(m), len);
            return;
        }
        Vec tmp = v;
        clear(v, len);
        axpy(v, m, tmp, len);
    }
    u64 get(const Vec& v, std::size_t c) const {
        u64 x = 0;
        for (int a = 0; a < k_; ++a) x |= ((plane(v, a)[c / 64] >> (c % 64)) & 1) << a;
        return x;
    }
    void set(Vec& v, std::size_t c, u64 value) const {
        for (int a = 0; a < k_; ++a) {
            u64& word = plane(v, a)[c / 64];
            const u64 bit = u64{1} << (c % 64);
            word = ((value >> a) & 1) ? (word | bit) : (word & ~bit);
        }
    }

private:
    std::size_t used_words(std::size_t len) const { return (len + 63) / 64; }
    u64 mask() const { return k_ == 64 ? ~u64{0} : (u64{1} << k_) - 1; }
    u64* plane(Vec& v, int a) const { return v.data() + static_cast<std::size_t>(a) * words_; }
    const u64* plane(const Vec& v, int a) const { return v.data() + static_cast<std::size_t>(a) * words_; }

    void shift(Vec& v, int e, std::size_t len) const {
        const std::size_t used = used_words(len);
        for (int a = k_ - 1; a >= 0; --a) {
            if (a >= e) {
                std::copy_n(plane(v, a - e), used, plane(v, a));
            } else {
                std::fill_n(plane(v, a), used, u64{0});
            }
        }
    }

    std::size_t n_;
    std::size_t words_;
    int k_;
    Modulus mod_;
};

/// Kernel of the leading principal submatrices of a lower triangular matrix
/// over Z/p^k, maintained as a direct sum of cyclic submodules while rows
/// arrive one at a time.
///
/// The kernel of an n x n matrix over Z/p^k is ⊕_j Z/p^{min(v_j, k)} where the
/// v_j are the valuations of its invariant factors, so the generator orders
/// recover the cokernel type. Appending row (r, ξ) cuts the kernel K ⊕ Z/p^k
/// of the old matrix plus a free coordinate down by the linear form
/// (x, y) -> r·x + ξy. Eliminating against the generator of least valuation
/// keeps every other generator cyclic; only the generators whose relation
/// meets the pivot need a small Smith normal form to split again.
template <class Backend>
class KernelTracker {
public:
    using Vec = typename Backend::Vec;
    using Row = typename Backend::Row;

    explicit KernelTracker(Backend backend) : be_(std::move(backend)), mod_(be_.modulus()) {}

    const Backend& backend() const { return be_; }
    std::size_t rows() const { return rows_; }
    const std::vector<Vec>& generators() const { return gens_; }
    const std::vector<int>& orders() const { return orders_; }

    void reset() {
        for (auto& g : gens_) release(std::move(g));
        gens_.clear();
        orders_.clear();
        rows_ = 0;
    }

    /// #{generators of order >= i} = rank(p^{i-1} Γ) for 1 <= i <= k.
    std::size_t count_at_least(int i) const {
        return static_cast<std::size_t>(std::count_if(orders_.begin(), orders_.end(), [i](int a) { return a >= i; }));
    }

    CokernelType cokernel_type() const {
        std::vector<int> vals(rows_ - gens_.size(), 0);
        vals.insert(vals.end(), orders_.begin(), orders_.end());
        return CokernelType(rows_, mod_.exponent(), std::move(vals));
    }

    void push_row(const Row& row) {
        const std::size_t i = rows_;
        const std::size_t len = i + 1;
        const int k = mod_.exponent();
        const std::size_t m = gens_.size();
        require(i < be_.n(), "more rows than the tracker dimension");
        ++rows_;

        // index m stands for the new coordinate e_i
        y_.resize(m + 1);
        w_.resize(m + 1);
        a_.resize(m + 1);
        for (std::size_t j = 0; j < m; ++j) {
            y_[j] = be_.dot(row, gens_[j], i);
            a_[j] = orders_[j];
        }
        y_[m] = be_.diagonal(row, i);
        a_[m] = k;
        for (std::size_t j = 0; j <= m; ++j) w_[j] = mod_.valuation(y_[j]);

        std::size_t s = m;
        for (std::size_t j = 0; j <= m; ++j) {
            if (w_[j] < w_[s] || (w_[j] == w_[s] && a_[j] < a_[s])) s = j;
        }
        if (w_[s] == k) {
            Vec e = acquire();
            be_.set(e, i, 1);
            gens_.push_back(std::move(e));
            orders_.push_back(k);
            return;
        }

        const int ws = w_[s];
        // q_j = y_j / y_s, the least lift mod p^{k - w_s}
        const u64 shift = mod_.power(ws);
        const u64 quotient_mod = mod_.power(k - ws);
        const u64 inv = mod_.inverse_unit(y_[s] / shift % quotient_mod);
        q_.assign(m + 1, 0);
        for (std::size_t j = 0; j <= m; ++j) {
            if (j != s && y_[j] != 0) {
                q_[j] = static_cast<u64>(static_cast<u128>(y_[j] / shift) * inv % quotient_mod);
            }
        }
        const int rs = a_[s] + ws - k;

        // generators whose relation still involves u after elimination
        tangled_.clear();
        for (std::size_t j = 0; j <= m; ++j) {
            if (j != s && a_[j] + w_[j] - k < rs) tangled_.push_back(j);
        }

        if (s == m && tangled_.empty()) {
            for (std::size_t j = 0; j < m; ++j) be_.set(gens_[j], i, mod_.neg(q_[j]));
            if (rs > 0) {
                Vec u = acquire();
                be_.set(u, i, mod_.power(k - ws));
                gens_.push_back(std::move(u));
                orders_.push_back(rs);
            }
            return;
        }

        // z_j = h_j - q_j h_s and u = p^{k - w_s} h_s; next[j] holds z_j, and
        // next[m] holds z_t when the pivot is an old generator
        Vec u;
        auto& next = next_;
        auto& next_orders = next_orders_;
        next.resize(m + 1);
        next_orders.assign(m + 1, -1);
        if (s == m) {
            for (std::size_t j = 0; j < m; ++j) be_.set(gens_[j], i, mod_.neg(q_[j]));
            u = acquire();
            be_.set(u, i, mod_.power(k - ws));
        } else {
            Vec& hs = gens_[s];
            for (std::size_t j = 0; j < m; ++j) {
                if (j != s) be_.axpy(gens_[j], mod_.neg(q_[j]), hs, len);
            }
            Vec zt = acquire();
            be_.axpy(zt, mod_.neg(q_[m]), hs, len);
            be_.set(zt, i, 1);
            be_.scale(hs, mod_.power(k - ws), len);
            u = std::move(hs);
            next[m] = std::move(zt);
            next_orders[m] = k;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (j == s) continue;
            next[j] = std::move(gens_[j]);
            next_orders[j] = a_[j];
        }

        gens_.clear();
        orders_.clear();
        for (std::size_t j = 0; j <= m; ++j) {
            if (next_orders[j] < 0) continue;
            if (std::find(tangled_.begin(), tangled_.end(), j) != tangled_.end()) continue;
            gens_.push_back(std::move(next[j]));
            orders_.push_back(next_orders[j]);
        }
        if (tangled_.empty()) {
            if (rs > 0) {
                gens_.push_back(std::move(u));
                orders_.push_back(rs);
            } else {
                release(std::move(u));
            }
            return;
        }

        // Presentation on (z_j for tangled j, u): p^{a_j} z_j + c_j u = 0, p^{r_s} u = 0.
        const std::size_t t = tangled_.size();
        DenseMatrix rel(t + 1, t + 1);
        for (std::size_t c = 0; c < t; ++c) {
            const std::size_t j = tangled_[c];
            const int e = a_[j] + ws - k;
            rel(c, c) = a_[j] >= k ? 0 : mod_.power(a_[j]);
            rel(t, c) = e >= 0 ? mod_.mul(q_[j], mod_.power(e)) : q_[j] / mod_.power(-e);
        }
        rel(t, t) = rs >= k ? 0 : mod_.power(rs);
        DenseMatrix basis = DenseMatrix::identity(t + 1);
        const std::vector<int> vals = smith_valuations(std::move(rel), mod_, &basis);

        std::vector<const Vec*> old(t + 1);
        for (std::size_t c = 0; c < t; ++c) old[c] = &next[tangled_[c]];
        old[t] = &u;
        for (std::size_t col = 0; col <= t; ++col) {
            if (vals[col] == 0) continue;
            Vec g = acquire();
            for (std::size_t c = 0; c <= t; ++c) be_.axpy(g, basis(c, col), *old[c], len);
            gens_.push_back(std::move(g));
            orders_.push_back(vals[col]);
        }
        for (std::size_t c = 0; c < t; ++c) release(std::move(next[tangled_[c]]));
        release(std::move(u));
    }

private:
    Vec acquire() {
        if (pool_.empty()) return be_.make();
        Vec v = std::move(pool_.back());
        pool_.pop_back();
        be_.clear(v, be_.n());
        return v;
    }
    void release(Vec v) {
        if (!v.empty()) pool_.push_back(std::move(v));
    }

    Backend be_;
    Modulus mod_;
    std::size_t rows_ = 0;
    std::vector<Vec> gens_;
    std::vector<int> orders_;
    std::vector<Vec> pool_;
    std::vector<u64> y_, q_;
    std::vector<int> w_, a_;
    std::vector<std::size_t> tangled_;
    std::vector<Vec> next_;
    std::vector<int> next_orders_;
};

} // namespace trirank
