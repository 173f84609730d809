#include "scencert/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace scencert {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr std::int64_t kSampleSizeCap = 10'000'000;

// Truncated Stirling correction: ln k! = k ln k - k + 0.5 ln(2 pi k) + corr(k).
double stirling_corr(double k) {
    const double k2 = k * k;
    return 1.0 / (12.0 * k) - 1.0 / (360.0 * k * k2) + 1.0 / (1260.0 * k * k2 * k2);
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw DomainError("epsilon must lie in (0,1)");
}

void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw DomainError("beta must lie in (0,1)");
}

}  // namespace

double log_choose(std::int64_t m, std::int64_t i) {
    if (m < 0 || i < 0 || i > m)
        throw DomainError("log_choose requires 0 <= i <= m");
    const std::int64_t k = std::min(i, m - i);
    if (k == 0) return 0.0;
    if (k <= 1024) {
        // Exact product form; at most 1024 terms, each log is O(1) ulp.
        double acc = 0.0;
        for (std::int64_t j = 1; j <= k; ++j)
            acc += std::log(static_cast<double>(m - k + j) / static_cast<double>(j));
        return acc;
    }
    // Both parts large: entropy form of Stirling, free of cancellation.
    const double a = static_cast<double>(k);
    const double b = static_cast<double>(m - k);
    const double n = static_cast<double>(m);
    return a * std::log(n / a) + b * std::log(n / b) +
           0.5 * std::log(n / (2.0 * M_PI * a * b)) +
           stirling_corr(n) - stirling_corr(a) - stirling_corr(b);
}

double log_binomial_cdf(std::int64_t m, std::int64_t k, double p) {
    check_epsilon(p);
    if (m < 0) throw DomainError("log_binomial_cdf requires m >= 0");
    if (k < 0) return -std::numeric_limits<double>::infinity();
    k = std::min(k, m);
    const double lp = std::log(p);
    const double l1p = std::log1p(-p);
    std::vector<double> terms(static_cast<std::size_t>(k) + 1);
    double shift = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i <= k; ++i) {
        const double t = log_choose(m, i) + static_cast<double>(i) * lp +
                         static_cast<double>(m - i) * l1p;
        terms[static_cast<std::size_t>(i)] = t;
        shift = std::max(shift, t);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - shift);
    return shift + std::log(acc);
}

double q_floyd(std::int64_t m, std::int64_t d, double epsilon) {
    check_epsilon(epsilon);
    if (d < 0 || m < d) throw DomainError("q_floyd requires m >= d >= 0");
    const double lq = log_choose(m, d) + static_cast<double>(m - d) * std::log1p(-epsilon);
    return clamp01(std::exp(lq));
}

double q_exact(std::int64_t m, std::int64_t d, double epsilon) {
    check_epsilon(epsilon);
    if (d < 1 || m < d) throw DomainError("q_exact requires m >= d >= 1");
    return clamp01(std::exp(log_binomial_cdf(m, d - 1, epsilon)));
}

double q_discard(std::int64_t m, std::int64_t d, std::int64_t r, double epsilon) {
    check_epsilon(epsilon);
    if (d < 0 || r < 0 || m < d + r)
        throw DomainError("q_discard requires r >= 0, d >= 0, m >= d + r");
    const double lq = log_choose(m, d) + log_binomial_cdf(m - d, r, epsilon);
    return clamp01(std::exp(lq));
}

double q_discard_unique(std::int64_t m, std::int64_t d, std::int64_t r, double epsilon) {
    check_epsilon(epsilon);
    if (d < 1 || r < 0 || m < d + r)
        throw DomainError("q_discard_unique requires r >= 0, d >= 1, m >= d + r");
    const double lq = log_choose(r + d - 1, r) + log_binomial_cdf(m, r + d - 1, epsilon);
    return clamp01(std::exp(lq));
}

double q_vc(std::int64_t m, std::int64_t d_vc, double epsilon) {
    check_epsilon(epsilon);
    if (d_vc < 0) throw DomainError("q_vc requires d_vc >= 0");
    if (static_cast<double>(m) * epsilon < 8.0)
        throw DomainError("q_vc requires m >= 8/epsilon (= " +
                          std::to_string(8.0 / epsilon) + ")");
    double shift = 0.0;  // i = 0 term is ln C(2m,0) = 0
    std::vector<double> terms(static_cast<std::size_t>(d_vc) + 1);
    for (std::int64_t i = 0; i <= d_vc; ++i) {
        const double t = log_choose(2 * m, i);
        terms[static_cast<std::size_t>(i)] = t;
        shift = std::max(shift, t);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - shift);
    const double lq = kLn2 + shift + std::log(acc) -
                      0.5 * epsilon * static_cast<double>(m) * kLn2;
    return clamp01(std::exp(lq));
}

double log_q(const BoundKind& kind, std::int64_t m, std::int64_t d, double epsilon) {
    check_epsilon(epsilon);
    switch (kind.family) {
        case BoundFamily::Floyd:
            if (d < 0 || m < d) throw DomainError("q_floyd requires m >= d >= 0");
            return log_choose(m, d) + static_cast<double>(m - d) * std::log1p(-epsilon);
        case BoundFamily::ExactBinomial:
            if (d < 1 || m < d) throw DomainError("q_exact requires m >= d >= 1");
            return log_binomial_cdf(m, d - 1, epsilon);
        case BoundFamily::Discard:
            if (d < 0 || kind.r < 0 || m < d + kind.r)
                throw DomainError("q_discard requires r >= 0, d >= 0, m >= d + r");
            return log_choose(m, d) + log_binomial_cdf(m - d, kind.r, epsilon);
        case BoundFamily::DiscardUnique:
            if (d < 1 || kind.r < 0 || m < d + kind.r)
                throw DomainError("q_discard_unique requires r >= 0, d >= 1, m >= d + r");
            return log_choose(kind.r + d - 1, kind.r) +
                   log_binomial_cdf(m, kind.r + d - 1, epsilon);
        case BoundFamily::VC: {
            if (d < 0) throw DomainError("q_vc requires d_vc >= 0");
            if (static_cast<double>(m) * epsilon < 8.0)
                throw DomainError("q_vc requires m >= 8/epsilon (= " +
                                  std::to_string(8.0 / epsilon) + ")");
            double shift = 0.0;
            std::vector<double> terms(static_cast<std::size_t>(d) + 1);
            for (std::int64_t i = 0; i <= d; ++i) {
                const double t = log_choose(2 * m, i);
                terms[static_cast<std::size_t>(i)] = t;
                shift = std::max(shift, t);
            }
            double acc = 0.0;
            for (double t : terms) acc += std::exp(t - shift);
            return kLn2 + shift + std::log(acc) -
                   0.5 * epsilon * static_cast<double>(m) * kLn2;
        }
    }
    throw DomainError("unknown bound kind");
}

double q_value(const BoundKind& kind, std::int64_t m, std::int64_t d, double epsilon) {
    return clamp01(std::exp(log_q(kind, m, d, epsilon)));
}

namespace {

// Smallest admissible m for the kind (VC depends on epsilon).
std::int64_t kind_floor(const BoundKind& kind, std::int64_t d, double epsilon) {
    switch (kind.family) {
        case BoundFamily::Floyd:
        case BoundFamily::ExactBinomial:
            return std::max<std::int64_t>(d, 1);
        case BoundFamily::Discard:
        case BoundFamily::DiscardUnique:
            return std::max<std::int64_t>(d + kind.r, 1);
        case BoundFamily::VC:
            return static_cast<std::int64_t>(std::ceil(8.0 / epsilon));
    }
    throw DomainError("unknown bound kind");
}

}  // namespace

double epsilon_for(std::int64_t m, std::int64_t d, double beta, const BoundKind& kind) {
    check_beta(beta);
    // For VC the precondition m >= 8/epsilon bounds the search domain below.
    double lo = 1e-12;
    if (kind.family == BoundFamily::VC) {
        lo = 8.0 / static_cast<double>(m);
        if (lo >= 1.0)
            throw InfeasibleQuery("q_vc needs m >= 8/epsilon; no epsilon in (0,1) admissible");
    }
    const double hi0 = 1.0 - 1e-12;
    const double q_hi = q_value(kind, m, d, hi0);
    if (q_hi > beta)
        throw InfeasibleQuery("no epsilon in (0,1) attains q(m,epsilon) <= beta for m=" +
                              std::to_string(m) + ", d=" + std::to_string(d));
    const double q_lo = q_value(kind, m, d, lo);
    if (q_lo <= beta) return lo;
    if (q_lo < q_hi)
        throw SolverFailure("q(m,.) not decreasing across the bisection bracket");
    double a = lo, b = hi0;
    while (b - a > 1e-9) {
        const double mid = 0.5 * (a + b);
        if (q_value(kind, m, d, mid) <= beta)
            b = mid;
        else
            a = mid;
    }
    return b;
}

std::int64_t sample_size_for(std::int64_t d, double epsilon, double beta,
                             const BoundKind& kind) {
    check_epsilon(epsilon);
    check_beta(beta);
    const std::int64_t m0 = kind_floor(kind, d, epsilon);
    if (m0 > kSampleSizeCap)
        throw InfeasibleQuery("required sample size exceeds the 10^7 cap");
    if (q_value(kind, m0, d, epsilon) <= beta) return m0;

    std::int64_t lo = m0, hi = m0;
    for (;;) {
        hi = std::min<std::int64_t>(hi * 2 + 1, kSampleSizeCap);
        if (q_value(kind, hi, d, epsilon) <= beta) break;
        lo = hi;
        if (hi == kSampleSizeCap)
            throw InfeasibleQuery("no m <= 10^7 attains q(m,epsilon) <= beta");
    }
    // Invariant: q(lo) > beta >= q(hi), so q decreases across [lo, hi]; narrow
    // by bisection, then scan the remaining window from the left (the head of
    // q_floyd is non-monotone near m = d, so minimality is settled by scan).
    while (hi - lo > 64) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (q_value(kind, mid, d, epsilon) <= beta)
            hi = mid;
        else
            lo = mid;
    }
    for (std::int64_t m = lo + 1; m <= hi; ++m)
        if (q_value(kind, m, d, epsilon) <= beta) return m;
    throw SolverFailure("sample_size_for scan failed to locate the crossing");
}

void CertificateQuery::validate() const {
    if (m < 1) throw DomainError("m must be a positive integer");
    if (d < 1) throw DomainError("d must be a positive integer");
    check_epsilon(epsilon);
    switch (kind.family) {
        case BoundFamily::Floyd:
        case BoundFamily::ExactBinomial:
            if (kind.r != 0) throw DomainError("r must be 0 for non-discard kinds");
            if (m < d) throw DomainError("m >= d required");
            break;
        case BoundFamily::Discard:
        case BoundFamily::DiscardUnique:
            if (kind.r < 0) throw DomainError("r >= 0 required");
            if (m < d + kind.r) throw DomainError("m >= d + r required");
            break;
        case BoundFamily::VC:
            if (kind.r != 0) throw DomainError("r must be 0 for the VC kind");
            if (static_cast<double>(m) * epsilon < 8.0)
                throw DomainError("q_vc requires m >= 8/epsilon (= " +
                                  std::to_string(8.0 / epsilon) + ")");
            break;
    }
}

std::string to_string(const BoundKind& kind) {
    switch (kind.family) {
        case BoundFamily::Floyd: return "floyd";
        case BoundFamily::ExactBinomial: return "exact";
        case BoundFamily::Discard: return "discard:" + std::to_string(kind.r);
        case BoundFamily::DiscardUnique: return "discard-unique:" + std::to_string(kind.r);
        case BoundFamily::VC: return "vc";
    }
    return "?";
}

BoundKind parse_bound_kind(const std::string& text, std::int64_t r) {
    std::string name = text;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        name = text.substr(0, colon);
        try {
            r = std::stoll(text.substr(colon + 1));
        } catch (const std::exception&) {
            throw DomainError("bad r suffix in bound kind '" + text + "'");
        }
    }
    if (r < 0) throw DomainError("r must be >= 0");
    if (name == "floyd") {
        if (r != 0) throw DomainError("kind 'floyd' does not take r");
        return BoundKind::floyd();
    }
    if (name == "exact" || name == "exact-binomial") {
        if (r != 0) throw DomainError("kind 'exact' does not take r");
        return BoundKind::exact_binomial();
    }
    if (name == "discard") return BoundKind::discard(r);
    if (name == "discard-unique") return BoundKind::discard_unique(r);
    if (name == "vc") {
        if (r != 0) throw DomainError("kind 'vc' does not take r");
        return BoundKind::vc();
    }
    throw DomainError("unknown bound kind '" + text + "'");
}

}  // namespace scencert
