#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rational_oracle.hpp"
#include "scencert/bounds.hpp"

using namespace scencert;

TEST_CASE("log_choose small cases and domain errors") {
    CHECK(log_choose(5, 0) == doctest::Approx(0.0));
    CHECK(log_choose(4, 2) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
    CHECK(log_choose(10, 10) == doctest::Approx(0.0));
    CHECK_THROWS_AS(log_choose(3, 4), DomainError);
    CHECK_THROWS_AS(log_choose(-1, 0), DomainError);
}

TEST_CASE("log_choose matches the big-integer oracle to 1e-12 relative") {
    const std::int64_t ms[] = {1000, 999, 4096, 100000, 1000000};
    for (const std::int64_t m : ms) {
        for (const std::int64_t i :
             {std::int64_t(1), std::int64_t(2), std::int64_t(17), m / 3, m / 2}) {
            const double expected = oracle::log_of(oracle::choose(m, i));
            CHECK(std::abs(log_choose(m, i) - expected) <=
                  1e-12 * std::abs(expected));
        }
    }
    // The worked value from the contract.
    const double ref = oracle::log_of(oracle::choose(1000, 500));
    CHECK(std::abs(log_choose(1000, 500) - ref) <= 1e-12 * ref);
}

TEST_CASE("q_floyd worked examples") {
    for (const std::int64_t d : {1, 3, 7})
        CHECK(q_floyd(d, d, 0.37) == doctest::Approx(1.0));
    // 20 * 0.9^19 ~ 2.70 clamps to one.
    CHECK(q_floyd(20, 1, 0.1) == doctest::Approx(1.0));
    const double expected = 200.0 * std::pow(0.9, 199);
    CHECK(q_floyd(200, 1, 0.1) == doctest::Approx(expected).epsilon(1e-10));
    CHECK_THROWS_AS(q_floyd(10, 1, 0.0), DomainError);
    CHECK_THROWS_AS(q_floyd(10, 1, 1.0), DomainError);
    CHECK_THROWS_AS(q_floyd(3, 4, 0.1), DomainError);
}

TEST_CASE("q_exact worked examples") {
    for (const std::int64_t m : {5, 20, 50})
        CHECK(q_exact(m, 1, 0.2) ==
              doctest::Approx(std::pow(0.8, m)).epsilon(1e-12));
    CHECK(q_exact(20, 1, 0.1) == doctest::Approx(std::pow(0.9, 20)).epsilon(1e-12));
    const double expected = std::pow(0.85, 20) + 20 * 0.15 * std::pow(0.85, 19);
    CHECK(q_exact(20, 2, 0.15) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(q_exact(20, 2, 0.15) == doctest::Approx(0.17556).epsilon(1e-4));
}

TEST_CASE("q_discard worked examples and r = 0 collapse") {
    for (const std::int64_t m : {5, 12, 40})
        for (const std::int64_t d : {1, 2})
            for (const double eps : {0.05, 0.3})
                CHECK(std::abs(q_discard(m, d, 0, eps) - q_floyd(m, d, eps)) <= 1e-12);
    const double expected =
        std::min(1.0, 30.0 * (std::pow(0.7, 29) + 29 * 0.3 * std::pow(0.7, 28)));
    CHECK(q_discard(30, 1, 1, 0.3) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(oracle::rel_err(q_discard(50, 2, 3, 0.2), oracle::q_discard(50, 2, 3, 1, 5)) <=
          1e-10);
    CHECK_THROWS_AS(q_discard(4, 2, 3, 0.2), DomainError);
}

TEST_CASE("q_discard_unique worked examples and r = 0 collapse") {
    for (const std::int64_t m : {5, 12, 40})
        for (const std::int64_t d : {1, 2})
            for (const double eps : {0.05, 0.3})
                CHECK(std::abs(q_discard_unique(m, d, 0, eps) - q_exact(m, d, eps)) <=
                      1e-12);
    const double expected = std::pow(0.75, 20) + 20 * 0.25 * std::pow(0.75, 19);
    CHECK(q_discard_unique(20, 1, 1, 0.25) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(oracle::rel_err(q_discard_unique(50, 2, 3, 0.2),
                          oracle::q_discard_unique(50, 2, 3, 1, 5)) <= 1e-10);
}

TEST_CASE("q_vc worked examples, precondition names the threshold") {
    CHECK(q_vc(80, 0, 0.1) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(q_vc(80, 2, 0.1) == doctest::Approx(1.0));  // clamped
    CHECK(oracle::rel_err(q_vc(2000, 2, 0.1), oracle::q_vc(2000, 2, 1, 10)) <= 1e-10);
    CHECK_THROWS_WITH_AS(q_vc(79, 0, 0.1), doctest::Contains("8/epsilon"), DomainError);
}

TEST_CASE("bound grid: tightness, monotonicity, oracle agreement") {
    const double eps_grid[] = {0.01, 0.05, 0.1, 0.2, 0.5};
    for (std::int64_t d = 1; d <= 10; ++d) {
        for (std::int64_t m = d; m <= 200; ++m) {
            double prev_in_eps = 2.0;
            for (const double eps : eps_grid) {
                const double qe = q_exact(m, d, eps);
                const double qf = q_floyd(m, d, eps);
                REQUIRE(qe <= qf + 1e-12);  // tightness ordering
                REQUIRE(qe < prev_in_eps);  // strictly decreasing in epsilon
                prev_in_eps = qe;
                if (m > d)  // nonincreasing in m
                    REQUIRE(qe <= q_exact(m - 1, d, eps) + 1e-12);
                if (d > 1)  // nondecreasing in d
                    REQUIRE(qe + 1e-12 >= q_exact(m, d - 1, eps));
            }
        }
    }
}

TEST_CASE("all bound kinds match the exact rational oracle for m <= 60") {
    // Rational epsilon values a/b.
    const std::pair<std::int64_t, std::int64_t> eps[] = {
        {1, 100}, {1, 20}, {1, 10}, {1, 4}, {1, 2}};
    for (std::int64_t m = 2; m <= 60; m += 3) {
        for (std::int64_t d = 1; d <= std::min<std::int64_t>(m, 5); ++d) {
            for (const auto& [a, b] : eps) {
                const double e = static_cast<double>(a) / static_cast<double>(b);
                CHECK(oracle::rel_err(q_floyd(m, d, e), oracle::q_floyd(m, d, a, b)) <=
                      1e-10);
                CHECK(oracle::rel_err(q_exact(m, d, e), oracle::q_exact(m, d, a, b)) <=
                      1e-10);
                for (const std::int64_t r : {0, 1, 3}) {
                    if (m < d + r) continue;
                    CHECK(oracle::rel_err(q_discard(m, d, r, e),
                                          oracle::q_discard(m, d, r, a, b)) <= 1e-10);
                    CHECK(oracle::rel_err(q_discard_unique(m, d, r, e),
                                          oracle::q_discard_unique(m, d, r, a, b)) <=
                          1e-10);
                }
            }
        }
    }
}

TEST_CASE("limit property: every kind decays far below clamp range") {
    const double log_1e50 = std::log(1e-50);
    CHECK(log_q(BoundKind::floyd(), 100000, 2, 0.1) < log_1e50);
    CHECK(log_q(BoundKind::exact_binomial(), 100000, 2, 0.1) < log_1e50);
    CHECK(log_q(BoundKind::discard(2), 100000, 2, 0.1) < log_1e50);
    CHECK(log_q(BoundKind::discard_unique(2), 100000, 2, 0.1) < log_1e50);
    CHECK(log_q(BoundKind::vc(), 100000, 2, 0.1) < log_1e50);
}

TEST_CASE("epsilon_for inverts the bounds") {
    // Closed form for the exact kind at d = 1: (1-eps)^m = beta.
    const double e = epsilon_for(100, 1, 0.01, BoundKind::exact_binomial());
    CHECK(e == doctest::Approx(1.0 - std::pow(0.01, 0.01)).epsilon(1e-6));
    CHECK(e == doctest::Approx(0.045007).epsilon(1e-4));
    CHECK(q_exact(100, 1, e) <= 0.01);

    // Floyd at m = d is identically one: infeasible for any beta < 1.
    CHECK_THROWS_AS(epsilon_for(5, 5, 0.5, BoundKind::floyd()), InfeasibleQuery);

    // Inverse of the q_exact worked example.
    const double beta0 = q_exact(20, 2, 0.15);
    const double e2 = epsilon_for(20, 2, beta0, BoundKind::exact_binomial());
    CHECK(e2 == doctest::Approx(0.15).epsilon(1e-7));

    // Returned epsilon is the smallest admissible one (within tolerance).
    for (const auto kind : {BoundKind::floyd(), BoundKind::discard(1)}) {
        const double ef = epsilon_for(60, 2, 0.05, kind);
        CHECK(q_value(kind, 60, 2, ef) <= 0.05);
        CHECK(q_value(kind, 60, 2, ef - 1e-6) > 0.05);
    }
}

namespace {

std::int64_t scan_oracle(std::int64_t d, double eps, double beta, const BoundKind& kind,
                         std::int64_t floor_m) {
    for (std::int64_t m = floor_m; m <= 200000; ++m) {
        double q;
        try {
            q = q_value(kind, m, d, eps);
        } catch (const DomainError&) {
            continue;
        }
        if (q <= beta) return m;
    }
    return -1;
}

}  // namespace

TEST_CASE("sample_size_for: worked values and scan-oracle grid") {
    CHECK(sample_size_for(1, 0.1, 0.01, BoundKind::exact_binomial()) == 44);

    const std::int64_t floyd_m = sample_size_for(1, 0.1, 0.01, BoundKind::floyd());
    CHECK(floyd_m == scan_oracle(1, 0.1, 0.01, BoundKind::floyd(), 1));

    const BoundKind kinds[] = {BoundKind::floyd(), BoundKind::exact_binomial(),
                               BoundKind::discard(2), BoundKind::discard_unique(2),
                               BoundKind::vc()};
    const double eps_grid[] = {0.05, 0.1, 0.25};
    const double beta_grid[] = {0.2, 0.01};
    std::size_t points = 0;
    for (const auto& kind : kinds) {
        for (const std::int64_t d : {1, 2}) {
            for (const double eps : eps_grid) {
                for (const double beta : beta_grid) {
                    if (points >= 50) break;
                    const std::int64_t m_star = sample_size_for(d, eps, beta, kind);
                    const std::int64_t floor_m =
                        kind.family == BoundFamily::VC
                            ? static_cast<std::int64_t>(std::ceil(8.0 / eps))
                            : std::max<std::int64_t>(d + kind.r, 1);
                    CHECK(m_star == scan_oracle(d, eps, beta, kind, floor_m));
                    CHECK(q_value(kind, m_star, d, eps) <= beta);
                    if (m_star - 1 >= floor_m)
                        CHECK(q_value(kind, m_star - 1, d, eps) > beta);
                    ++points;
                }
            }
        }
    }
    CHECK(points >= 50);  // grid size per the contract

    CHECK_THROWS_AS(sample_size_for(1, 1e-6, 1e-300, BoundKind::exact_binomial()),
                    InfeasibleQuery);
}

TEST_CASE("bound kind parsing round-trips") {
    CHECK(parse_bound_kind("floyd") == BoundKind::floyd());
    CHECK(parse_bound_kind("exact") == BoundKind::exact_binomial());
    CHECK(parse_bound_kind("discard:3") == BoundKind::discard(3));
    CHECK(parse_bound_kind("discard", 2) == BoundKind::discard(2));
    CHECK(parse_bound_kind("discard-unique:1") == BoundKind::discard_unique(1));
    CHECK(parse_bound_kind("vc") == BoundKind::vc());
    CHECK_THROWS_AS(parse_bound_kind("nope"), DomainError);
    CHECK_THROWS_AS(parse_bound_kind("floyd:2"), DomainError);
    for (const auto& kind : {BoundKind::floyd(), BoundKind::discard(5)})
        CHECK(parse_bound_kind(to_string(kind)) == kind);
}

TEST_CASE("certificate query validation") {
    CertificateQuery q{44, 1, 0.1, 0.0, BoundKind::exact_binomial()};
    CHECK_NOTHROW(q.validate());
    q.m = 0;
    CHECK_THROWS_AS(q.validate(), DomainError);
    q = {10, 2, 0.1, 0.0, BoundKind::discard(9)};
    CHECK_THROWS_AS(q.validate(), DomainError);  // m < d + r
    q = {10, 2, 0.1, 0.0, BoundKind::vc()};
    CHECK_THROWS_AS(q.validate(), DomainError);  // m < 8/eps
    q = {100, 2, 0.1, 0.0, BoundKind::vc()};
    CHECK_NOTHROW(q.validate());
}
