#include "trirank/modular.hpp"

#include "trirank/errors.hpp"

#include <fmt/format.h>

namespace trirank {

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

bool checked_pow(u64 base, int exponent, u64 limit, u64& out) {
    u128 acc = 1;
    for (int i = 0; i < exponent; ++i) {
        acc *= base;
        if (acc >= limit) return false;
    }
    out = static_cast<u64>(acc);
    return true;
}

Modulus::Modulus(u64 p, int exponent) : p_(p), exponent_(exponent), value_(1) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    require(exponent >= 1, fmt::format("precision must be positive, got {}", exponent));
    require(checked_pow(p, exponent, u64{1} << 62, value_),
            fmt::format("p^E = {}^{} must stay below 2^62", p, exponent));
}

int Modulus::valuation(u64 x) const {
    x %= value_;
    if (x == 0) return exponent_;
    int v = 0;
    while (x % p_ == 0) {
        x /= p_;
        ++v;
    }
    return v;
}

u64 Modulus::unit_part(u64 x) const {
    x %= value_;
    if (x == 0) return 0;
    while (x % p_ == 0) x /= p_;
    return x;
}

u64 Modulus::inverse_unit(u64 u) const {
    // extended Euclid on (u, p^e)
    __int128 old_r = static_cast<__int128>(u % value_), r = value_;
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        __int128 q = old_r / r;
        __int128 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw ValidationError(fmt::format("{} is not a unit mod {}", u, value_));
    __int128 m = value_;
    old_s %= m;
    if (old_s < 0) old_s += m;
    return static_cast<u64>(old_s);
}

u64 Modulus::power(int k) const {
    u64 r = 1;
    for (int i = 0; i < k; ++i) r *= p_;
    return r;
}

u64 Modulus::divide(u64 dividend, u64 divisor) const {
    int vd = valuation(divisor);
    int vn = valuation(dividend);
    if (vn < vd) throw NumericalError("division by an element of larger valuation");
    if (vn >= exponent_) return 0;
    u64 q = mul(unit_part(dividend), inverse_unit(unit_part(divisor)));
    q = mul(q, power(vn - vd));
    return q % power(exponent_ - vd);
}

} // namespace trirank
