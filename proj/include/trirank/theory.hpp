#pragma once

#include "trirank/modular.hpp"
#include "trirank/partition.hpp"

#include <cstdint>

namespace trirank {

/// (p, d, ζ, χ₀) and the derived intensity χ = χ₀ p^{-ζ} / (p - 1).
struct TheoryParams {
    u64 p = 2;
    int d = 1;
    double zeta = 0;
    double chi0 = 0;
    double chi = 0;
};

TheoryParams make_theory_params(u64 p, int d, double zeta, double chi0);

/// Truncation bookkeeping for series and products.
struct SeriesDiagnostics {
    int terms = 0;
    double tail_bound = 0;
    int precision_bits = 0;
    bool underflow = false;
};

/// χ₀ for the law with P(ξ ≡ 0) = α and the rest spread evenly over the
/// nonzero residues mod p: (p-1)/p Π_{i>=1} (p-1)β_i / (p - β_i) with
/// β_i = 1 + (p-1) r^i, r = (pα - 1)/(p - 1).
double chi0_symmetric(u64 p, double alpha, SeriesDiagnostics* diag = nullptr);

double chi_from_zeta(u64 p, double chi0, double zeta);

/// ⌊log_p n + ζ + 1/2⌋, with log_p n taken exactly when n is a power of p.
std::int64_t centering(u64 p, u64 n, double zeta);

/// Fractional part of -log_p n; zero exactly when n is a power of p.
double zeta_from_n(u64 p, u64 n);

/// P(L = x) for the one-dimensional limit law with intensity χ.
///
/// The alternating series cancels almost completely in the right tail, so it
/// is summed in MPFR at increasing precision until the cancellation is
/// resolved. Values below the double range come back as 0 with
/// diag->underflow set.
double pmf_L1(u64 p, double chi, std::int64_t x, SeriesDiagnostics* diag = nullptr);

/// E p^{<L, λ>} = ((p-1)χ)^{|λ|} / |λ|! · MC(G_{λ'}).
double moment_Ld(u64 p, double chi, const Partition& lambda);

} // namespace trirank
