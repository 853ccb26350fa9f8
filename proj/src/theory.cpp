#include "trirank/theory.hpp"

#include "trirank/errors.hpp"
#include "trirank/pgroup.hpp"

#include <cfloat>
#include <cmath>

#include <fmt/format.h>
#include <mpfr.h>

namespace trirank {

namespace {

class Mp {
public:
    explicit Mp(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    ~Mp() { mpfr_clear(v_); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

bool exact_log(u64 p, u64 n, int& m) {
    m = 0;
    u64 x = 1;
    while (x < n) {
        if (x > n / p) return false;
        x *= p;
        ++m;
    }
    return x == n;
}

struct PmfPass {
    bool resolved = false;
    double value = 0;
    int terms = 0;
};

// One evaluation at fixed precision. The result is trusted only when the sum
// clearly exceeds the rounding noise accumulated from the terms.
PmfPass pmf_pass(u64 p, double chi, std::int64_t x, mpfr_prec_t prec) {
    const mpfr_rnd_t rnd = MPFR_RNDN;
    Mp q(prec), qi(prec), prefactor(prec), one_minus(prec);
    mpfr_set_ui(q.get(), 1, rnd);
    mpfr_div_ui(q.get(), q.get(), static_cast<unsigned long>(p), rnd);

    // Π_{i>=1} (1 - p^{-i})
    mpfr_set_ui(prefactor.get(), 1, rnd);
    mpfr_set(qi.get(), q.get(), rnd);
    for (int i = 1; mpfr_get_exp(qi.get()) > -static_cast<mpfr_exp_t>(prec) - 8; ++i) {
        mpfr_ui_sub(one_minus.get(), 1, qi.get(), rnd);
        mpfr_mul(prefactor.get(), prefactor.get(), one_minus.get(), rnd);
        mpfr_mul(qi.get(), qi.get(), q.get(), rnd);
    }

    Mp sum(prec), abs_sum(prec), term(prec), arg(prec), expo(prec), coeff(prec), qm(prec), tmp(prec);
    mpfr_set_zero(sum.get(), 1);
    mpfr_set_zero(abs_sum.get(), 1);
    // coeff_m = p^{-C(m,2)} / Π_{j<=m} (1 - p^{-j}), built incrementally
    mpfr_set_ui(coeff.get(), 1, rnd);
    mpfr_set_ui(qm.get(), 1, rnd); // p^{-m}
    // χ p^{m - x} starts at m = 0
    mpfr_set_d(arg.get(), chi, rnd);
    if (x >= 0) {
        mpfr_set_ui(tmp.get(), static_cast<unsigned long>(p), rnd);
        mpfr_pow_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(x), rnd);
        mpfr_div(arg.get(), arg.get(), tmp.get(), rnd);
    } else {
        mpfr_set_ui(tmp.get(), static_cast<unsigned long>(p), rnd);
        mpfr_pow_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(-x), rnd);
        mpfr_mul(arg.get(), arg.get(), tmp.get(), rnd);
    }

    PmfPass out;
    for (int m = 0;; ++m) {
        if (m > 0) {
            // coeff_m = coeff_{m-1} * p^{-(m-1)} / (1 - p^{-m})
            mpfr_mul(coeff.get(), coeff.get(), qm.get(), rnd);
            mpfr_mul(qm.get(), qm.get(), q.get(), rnd);
            mpfr_ui_sub(tmp.get(), 1, qm.get(), rnd);
            mpfr_div(coeff.get(), coeff.get(), tmp.get(), rnd);
            mpfr_mul_ui(arg.get(), arg.get(), static_cast<unsigned long>(p), rnd);
        }
        mpfr_neg(expo.get(), arg.get(), rnd);
        mpfr_exp(expo.get(), expo.get(), rnd);
        mpfr_mul(term.get(), expo.get(), coeff.get(), rnd);
        if (m % 2 == 1) mpfr_neg(term.get(), term.get(), rnd);
        mpfr_add(sum.get(), sum.get(), term.get(), rnd);
        mpfr_abs(tmp.get(), term.get(), rnd);
        mpfr_add(abs_sum.get(), abs_sum.get(), tmp.get(), rnd);
        out.terms = m + 1;
        // |term| shrinks by at least 2 p^{-m} per step from m = 1 on
        if (m >= 1) {
            if (mpfr_zero_p(term.get())) break;
            if (mpfr_get_exp(term.get()) < mpfr_get_exp(abs_sum.get()) - static_cast<mpfr_exp_t>(prec) - 8) break;
        }
        if (m > 100000) throw NumericalError("pmf series failed to terminate");
    }

    if (mpfr_zero_p(abs_sum.get())) {
        out.resolved = true;
        out.value = 0;
        return out;
    }
    // rounding noise is a small multiple of 2^-prec times the absolute sum
    const mpfr_exp_t noise_exp = mpfr_get_exp(abs_sum.get()) - static_cast<mpfr_exp_t>(prec) + 80;
    if (mpfr_zero_p(sum.get()) || mpfr_get_exp(sum.get()) < noise_exp) return out;
    mpfr_div(sum.get(), sum.get(), prefactor.get(), rnd);
    out.resolved = true;
    out.value = mpfr_get_d(sum.get(), rnd);
    return out;
}

} // namespace

TheoryParams make_theory_params(u64 p, int d, double zeta, double chi0) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    require(d >= 1, "d must be positive");
    require(std::isfinite(chi0) && chi0 > 0, fmt::format("chi0 = {} must be positive and finite", chi0));
    return TheoryParams{p, d, zeta, chi0, chi_from_zeta(p, chi0, zeta)};
}

double chi0_symmetric(u64 p, double alpha, SeriesDiagnostics* diag) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    require(alpha > 0 && alpha < 1, fmt::format("alpha = {} must lie in (0, 1)", alpha));
    using R = long double;
    const R pp = static_cast<R>(p);
    const R r = (pp * static_cast<R>(alpha) - 1) / (pp - 1);
    R prod = 1;
    R ri = 1;
    int i = 0;
    int quiet = 0;
    while (quiet < 3) {
        ++i;
        ri *= r;
        const R beta = 1 + (pp - 1) * ri;
        if (!(beta > 0 && beta < pp)) throw NumericalError(fmt::format("beta_{} = {} outside (0, p)", i, static_cast<double>(beta)));
        const R factor = (pp - 1) * beta / (pp - beta);
        prod *= factor;
        quiet = std::fabs(static_cast<double>(factor - 1)) < 1e-16 ? quiet + 1 : 0;
        if (i > 10'000'000) throw NumericalError("chi0 product failed to converge");
    }
    if (diag) {
        // log factor_j ~ p r^j, so the remaining tail is geometric in |r|
        const double ar = std::fabs(static_cast<double>(r));
        diag->terms = i;
        diag->tail_bound = 2.0 * static_cast<double>(p) * std::fabs(static_cast<double>(ri * r)) / (1 - ar);
    }
    return static_cast<double>((pp - 1) / pp * prod);
}

double chi_from_zeta(u64 p, double chi0, double zeta) {
    require(std::isfinite(zeta), "zeta must be finite");
    return chi0 * std::pow(static_cast<double>(p), -zeta) / static_cast<double>(p - 1);
}

std::int64_t centering(u64 p, u64 n, double zeta) {
    require(n >= 1, "n must be positive");
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    int m = 0;
    if (exact_log(p, n, m)) {
        return static_cast<std::int64_t>(m) + static_cast<std::int64_t>(std::floor(zeta + 0.5));
    }
    const long double lg = std::log(static_cast<long double>(n)) / std::log(static_cast<long double>(p));
    return static_cast<std::int64_t>(std::floor(lg + static_cast<long double>(zeta) + 0.5L));
}

double zeta_from_n(u64 p, u64 n) {
    require(n >= 1, "n must be positive");
    int m = 0;
    if (exact_log(p, n, m)) return 0.0;
    const long double lg = std::log(static_cast<long double>(n)) / std::log(static_cast<long double>(p));
    return static_cast<double>(std::ceil(lg) - lg);
}

double pmf_L1(u64 p, double chi, std::int64_t x, SeriesDiagnostics* diag) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    require(std::isfinite(chi) && chi > 0, fmt::format("chi = {} must be positive", chi));
    require(x > -100000 && x < 100000, "x out of range");
    // beyond 1280 bits an unresolved sum is below 2^-1100, far under DBL_MIN
    constexpr mpfr_prec_t kMaxPrec = 1280;
    PmfPass pass;
    mpfr_prec_t prec = 128;
    while (true) {
        pass = pmf_pass(p, chi, x, prec);
        if (pass.resolved || prec >= kMaxPrec) break;
        prec = std::min<mpfr_prec_t>(2 * prec, kMaxPrec);
    }
    double value = pass.resolved ? pass.value : 0.0;
    if (value < -1e-12) throw NumericalError(fmt::format("pmf evaluated to {} at x = {}", value, x));
    const bool underflow = value < DBL_MIN;
    if (underflow) value = 0;
    if (diag) {
        diag->terms = pass.terms;
        diag->precision_bits = static_cast<int>(prec);
        diag->underflow = underflow;
        diag->tail_bound = std::ldexp(1.0, -static_cast<int>(prec) + 80);
    }
    return value;
}

double moment_Ld(u64 p, double chi, const Partition& lambda) {
    require(is_prime(p), fmt::format("p = {} is not prime", p));
    const int size = lambda.size();
    const BigInt mc = maximal_chain_count(conjugate(lambda), p);
    const long double base = static_cast<long double>(p - 1) * static_cast<long double>(chi);
    const long double value = std::pow(base, size) / std::tgamma(static_cast<long double>(size) + 1) *
                              mc.convert_to<long double>();
    return static_cast<double>(value);
}

} // namespace trirank
