#pragma once

#include <cstdint>

namespace trirank {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

bool is_prime(u64 n);

/// Integer power with overflow detection; returns false if the result would
/// not fit below `limit`.
bool checked_pow(u64 base, int exponent, u64 limit, u64& out);

/// Arithmetic in the local ring Z/p^e.
///
/// Every element is unit * p^v; the valuation v is reported as e for zero.
/// The modulus is kept below 2^62 so sums of two residues never overflow.
class Modulus {
public:
    using value_type = u64;

    Modulus(u64 p, int exponent);

    u64 p() const { return p_; }
    int exponent() const { return exponent_; }
    u64 value() const { return value_; }

    u64 reduce(u64 x) const { return x % value_; }
    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= value_ ? s - value_ : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + value_ - b; }
    u64 neg(u64 a) const { return a == 0 ? 0 : value_ - a; }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>((static_cast<u128>(a) * b) % value_); }

    /// p-adic valuation of a residue, `exponent()` for zero.
    int valuation(u64 x) const;
    /// x / p^valuation(x); zero maps to zero.
    u64 unit_part(u64 x) const;
    /// Inverse of a residue coprime to p.
    u64 inverse_unit(u64 u) const;
    /// p^k as an integer, 0 <= k <= exponent().
    u64 power(int k) const;

    /// Solves q * divisor == dividend (mod p^e) when valuation(divisor) <= valuation(dividend).
    /// The quotient is defined modulo p^(e - valuation(divisor)); the least lift is returned.
    u64 divide(u64 dividend, u64 divisor) const;

    friend bool operator==(const Modulus& a, const Modulus& b) {
        return a.p_ == b.p_ && a.exponent_ == b.exponent_;
    }

private:
    u64 p_;
    int exponent_;
    u64 value_;
};

} // namespace trirank
