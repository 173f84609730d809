#ifndef SCENCERT_BOUNDS_HPP
#define SCENCERT_BOUNDS_HPP

#include <cstdint>
#include <string>

#include "scencert/errors.hpp"

// Confidence bounds q(m, epsilon) for compression-based violation
// certificates, evaluated in log space so that tiny tail probabilities and
// huge binomial coefficients never overflow. Raw expressions may exceed 1;
// the q_* entry points clamp to [0,1], the log_q_* ones do not.

namespace scencert {

enum class BoundFamily {
    Floyd,          // C(m,d) (1-eps)^(m-d)
    ExactBinomial,  // sum_{i<d} C(m,i) eps^i (1-eps)^(m-i)
    Discard,        // C(m,d) sum_{i<=r} C(m-d,i) eps^i (1-eps)^(m-d-i)
    DiscardUnique,  // C(r+d-1,r) sum_{i<=r+d-1} C(m,i) eps^i (1-eps)^(m-i)
    VC,             // 2 (sum_{i<=d} C(2m,i)) 2^(-eps m / 2), advisory only
};

struct BoundKind {
    BoundFamily family = BoundFamily::ExactBinomial;
    // Number of discarded samples; meaningful for Discard/DiscardUnique,
    // must be 0 otherwise.
    std::int64_t r = 0;

    static BoundKind floyd() { return {BoundFamily::Floyd, 0}; }
    static BoundKind exact_binomial() { return {BoundFamily::ExactBinomial, 0}; }
    static BoundKind discard(std::int64_t r) { return {BoundFamily::Discard, r}; }
    static BoundKind discard_unique(std::int64_t r) { return {BoundFamily::DiscardUnique, r}; }
    static BoundKind vc() { return {BoundFamily::VC, 0}; }

    bool operator==(const BoundKind&) const = default;
};

std::string to_string(const BoundKind& kind);
// Accepts "floyd", "exact", "discard", "discard-unique", "vc" (with optional
// ":r" suffix for the discard variants). Throws DomainError otherwise.
BoundKind parse_bound_kind(const std::string& text, std::int64_t r = 0);

// A fully specified certificate query; validate() checks the per-kind
// preconditions (m >= d, m >= d + r, m >= 8/eps, ...).
struct CertificateQuery {
    std::int64_t m = 0;
    std::int64_t d = 0;
    double epsilon = 0.0;
    double beta = 0.0;
    BoundKind kind;

    void validate() const;
};

// ln C(m, i), relative error <= 1e-12 up to m = 10^6.
double log_choose(std::int64_t m, std::int64_t i);

// ln of the binomial lower tail P(Bin(m,p) <= k), max-shifted summation.
double log_binomial_cdf(std::int64_t m, std::int64_t k, double p);

double q_floyd(std::int64_t m, std::int64_t d, double epsilon);
double q_exact(std::int64_t m, std::int64_t d, double epsilon);
double q_discard(std::int64_t m, std::int64_t d, std::int64_t r, double epsilon);
double q_discard_unique(std::int64_t m, std::int64_t d, std::int64_t r, double epsilon);
double q_vc(std::int64_t m, std::int64_t d_vc, double epsilon);

// Unclamped log value of the selected bound (may be > 0).
double log_q(const BoundKind& kind, std::int64_t m, std::int64_t d, double epsilon);
// Clamped dispatch over the kind tag.
double q_value(const BoundKind& kind, std::int64_t m, std::int64_t d, double epsilon);

// Smallest epsilon with q(m, epsilon) <= beta, bisection to 1e-9 absolute.
// Throws InfeasibleQuery when even epsilon -> 1 cannot reach beta.
double epsilon_for(std::int64_t m, std::int64_t d, double beta, const BoundKind& kind);

// Smallest m with q(m, epsilon) <= beta. Brackets by doubling, then narrows
// only where q is verified to decrease, finishing with a left-to-right scan
// (q_floyd grows before it decays near m = d). Throws InfeasibleQuery above
// the 10^7 cap.
std::int64_t sample_size_for(std::int64_t d, double epsilon, double beta,
                             const BoundKind& kind);

}  // namespace scencert

#endif
