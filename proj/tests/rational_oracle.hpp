#ifndef SCENCERT_TESTS_RATIONAL_ORACLE_HPP
#define SCENCERT_TESTS_RATIONAL_ORACLE_HPP

#include <cstdint>
#include <stdexcept>

#include <gmpxx.h>

// Test-only exact-arithmetic oracles for the confidence bounds. Epsilon is a
// rational a/b and everything is evaluated in mpq, so the only approximation
// is the final conversion to double for comparison.

namespace oracle {

inline mpz_class choose(std::int64_t m, std::int64_t i) {
    if (i < 0 || i > m) return 0;
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(m),
                 static_cast<unsigned long>(i));
    return out;
}

// ln of a positive rational via mantissa/exponent split of both parts.
inline double log_of(const mpz_class& v) {
    signed long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * 0.6931471805599453;
}

// sum_{i=0}^{k} C(n,i) a^i (b-a)^(n-i) / b^n  ==  P(Bin(n, a/b) <= k)
inline mpq_class binomial_cdf(std::int64_t n, std::int64_t k, std::int64_t a,
                              std::int64_t b) {
    mpz_class num = 0;
    const mpz_class ca = a, cba = b - a;
    for (std::int64_t i = 0; i <= k && i <= n; ++i) {
        mpz_class term = choose(n, i);
        mpz_class pa, pb;
        mpz_pow_ui(pa.get_mpz_t(), ca.get_mpz_t(), static_cast<unsigned long>(i));
        mpz_pow_ui(pb.get_mpz_t(), cba.get_mpz_t(), static_cast<unsigned long>(n - i));
        num += term * pa * pb;
    }
    mpz_class den;
    const mpz_class cb = b;
    mpz_pow_ui(den.get_mpz_t(), cb.get_mpz_t(), static_cast<unsigned long>(n));
    mpq_class out(num, den);
    out.canonicalize();
    return out;
}

inline mpq_class clamp1(mpq_class v) { return v > 1 ? mpq_class(1) : v; }

inline mpq_class q_floyd(std::int64_t m, std::int64_t d, std::int64_t a, std::int64_t b) {
    mpz_class pb, pa;
    const mpz_class cba = b - a, cb = b;
    mpz_pow_ui(pa.get_mpz_t(), cba.get_mpz_t(), static_cast<unsigned long>(m - d));
    mpz_pow_ui(pb.get_mpz_t(), cb.get_mpz_t(), static_cast<unsigned long>(m - d));
    mpq_class out(choose(m, d) * pa, pb);
    out.canonicalize();
    return clamp1(out);
}

inline mpq_class q_exact(std::int64_t m, std::int64_t d, std::int64_t a, std::int64_t b) {
    return clamp1(binomial_cdf(m, d - 1, a, b));
}

inline mpq_class q_discard(std::int64_t m, std::int64_t d, std::int64_t r,
                           std::int64_t a, std::int64_t b) {
    return clamp1(mpq_class(choose(m, d)) * binomial_cdf(m - d, r, a, b));
}

inline mpq_class q_discard_unique(std::int64_t m, std::int64_t d, std::int64_t r,
                                  std::int64_t a, std::int64_t b) {
    return clamp1(mpq_class(choose(r + d - 1, r)) * binomial_cdf(m, r + d - 1, a, b));
}

// Exact only when eps*m/2 = a*m/(2b) is an integer.
inline mpq_class q_vc(std::int64_t m, std::int64_t d_vc, std::int64_t a, std::int64_t b) {
    if ((a * m) % (2 * b) != 0)
        throw std::invalid_argument("q_vc oracle needs an integer exponent");
    const auto k = static_cast<unsigned long>((a * m) / (2 * b));
    mpz_class sum = 0;
    for (std::int64_t i = 0; i <= d_vc; ++i) sum += choose(2 * m, i);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
    mpq_class out(2 * sum, den);
    out.canonicalize();
    return clamp1(out);
}

inline double rel_err(double impl, const mpq_class& exact) {
    const double e = exact.get_d();
    if (e == 0.0) return std::abs(impl);
    return std::abs(impl - e) / std::abs(e);
}

}  // namespace oracle

#endif
