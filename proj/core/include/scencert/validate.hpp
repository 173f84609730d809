#ifndef SCENCERT_VALIDATE_HPP
#define SCENCERT_VALIDATE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scencert/canonical.hpp"
#include "scencert/cascade.hpp"
#include "scencert/robust_box.hpp"
#include "scencert/scenario.hpp"

// Monte Carlo estimation of violation probabilities and repeated-trial
// validation of the certificate laws on the registered canonical problems.

namespace scencert {

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct ViolationEstimate {
    double point = 0.0;
    double ci_low = 0.0, ci_high = 1.0;  // exact binomial interval
    std::size_t n_fresh = 0;
};

// Exact (Clopper-Pearson) binomial confidence interval for `successes`
// out of `n` at the given two-sided level.
std::pair<double, double> binomial_ci(std::size_t successes, std::size_t n,
                                      double level);

// Fraction of n_fresh fresh draws where the evaluator fires, with exact CI.
ViolationEstimate estimate_violation(const std::function<bool(const Sample&)>& violated,
                                     const DistributionSpec& dist, std::size_t n_fresh,
                                     std::uint64_t seed, double level = 0.99);

struct MethodSpec {
    enum class Alg { Scenario, Discard, Box, BoxDiscard, Cascade, CascadeDiscard };
    Alg alg = Alg::Scenario;
    std::int64_t r = 0;
    BoundKind kind = BoundKind::exact_binomial();

    // "scenario", "scenario-floyd", "discard[:r]", "box", "box-floyd",
    // "box-discard[:r]", "cascade", "cascade-discard[:r]"
    static MethodSpec parse(const std::string& text, std::int64_t r = 0);
    std::string name() const;
    bool needs_second_stage() const {
        return alg == Alg::Cascade || alg == Alg::CascadeDiscard;
    }
};

struct ExperimentConfig {
    ScenarioProblem problem;
    std::optional<SecondStageSpec> second_stage;
    DistributionSpec distribution;
    std::optional<CanonicalTag> canonical;  // enables analytic per-trial violation
    std::size_t m = 0;
    double epsilon = 0.0;
    MethodSpec method;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t n_fresh = 100'000;  // estimator size when no analytic law exists
};

struct ExperimentReport {
    std::size_t trials = 0;
    std::size_t m = 0;
    double epsilon = 0.0;
    std::string method;
    std::string kind;
    std::int64_t d = 0;
    double empirical_freq = 0.0;
    double bound_value = 0.0;
    std::optional<double> exact_law_value;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::string> caveats;
    std::size_t violation_trials = 0;
    std::size_t degenerate_trials = 0;
    std::size_t straddle_trials = 0;  // estimator CI straddled epsilon
};

// Repeat `trials` times: draw m samples with derive(seed, k), run the method,
// measure the violation of the returned solution (analytically for canonical
// problems, by estimate_violation otherwise), and compare the frequency of
// {violation > epsilon} against the bound and, where one applies, the exact
// law. Trials fan out across SCENARIO_CERT_THREADS workers; the report is a
// pure function of config + seed.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct KsReport {
    std::size_t trials = 0;
    std::int64_t d = 0;
    double statistic = 0.0;
    double critical_1pct = 0.0;
    Verdict verdict = Verdict::Inconclusive;
};

// Proposition-2 style check: T independent d-multisamples, hypothesis built
// from each, exact violation compared against the law F(alpha) = alpha^d by
// the Kolmogorov-Smirnov statistic.
KsReport error_distribution_check(CanonicalTag tag, std::int64_t d, std::size_t trials,
                                  std::uint64_t seed);

struct PartitionReport {
    std::size_t trials = 0;
    std::size_t violations = 0;  // multisamples with != 1 consistent subset
    Verdict verdict = Verdict::Inconclusive;
};

// Exhaustively enumerate all C(m,d) subsets of each multisample and count the
// consistent ones; exactly one is expected. Capped at m <= 12.
PartitionReport partition_check(CanonicalTag tag, std::size_t m, std::size_t trials,
                                std::uint64_t seed);

// sup-distance of an empirical sample against F(x) = clamp(x)^exponent.
double ks_statistic_vs_power_law(std::vector<double> values, double exponent);
// Asymptotic two-sided critical value at significance alpha.
double ks_critical(double alpha, std::size_t n);

}  // namespace scencert

#endif
