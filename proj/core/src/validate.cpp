#include "scencert/validate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace scencert {

namespace {

std::size_t worker_count(std::size_t trials) {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    n = std::min<std::size_t>(n, 8);
    if (const char* env = std::getenv("SCENARIO_CERT_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) n = static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::min(n, trials));
}

// Deterministic fan-out: each worker handles a strided set of trial indices,
// results land in per-trial slots, so the merge is order-independent.
template <typename Fn>
void parallel_trials(std::size_t trials, Fn&& fn) {
    const std::size_t workers = worker_count(trials);
    if (workers <= 1) {
        for (std::size_t k = 0; k < trials; ++k) fn(k);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < trials; k += workers) fn(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double binomial_cdf(std::size_t n, std::size_t k, double p) {
    return std::exp(log_binomial_cdf(static_cast<std::int64_t>(n),
                                     static_cast<std::int64_t>(k), p));
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::pair<double, double> binomial_ci(std::size_t successes, std::size_t n,
                                      double level) {
    if (n == 0) throw DomainError("binomial_ci requires n >= 1");
    if (successes > n) throw DomainError("successes exceed n");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0,1)");
    const double alpha = 1.0 - level;

    auto bisect = [](const std::function<double(double)>& f) {
        // f increasing with a sign change over (0,1); returns the root.
        double lo = 1e-12, hi = 1.0 - 1e-12;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    double low = 0.0, high = 1.0;
    if (successes > 0) {
        // P(Bin(n,p) >= k) = alpha/2, increasing in p.
        low = bisect([&](double p) {
            return (1.0 - binomial_cdf(n, successes - 1, p)) - alpha / 2.0;
        });
    }
    if (successes < n) {
        // P(Bin(n,p) <= k) = alpha/2, decreasing in p.
        high = bisect([&](double p) {
            return (alpha / 2.0) - binomial_cdf(n, successes, p);
        });
    }
    return {low, high};
}

ViolationEstimate estimate_violation(const std::function<bool(const Sample&)>& violated,
                                     const DistributionSpec& dist, std::size_t n_fresh,
                                     std::uint64_t seed, double level) {
    if (n_fresh == 0) throw DomainError("estimate_violation requires n_fresh >= 1");
    const std::vector<Sample> fresh = draw(dist, n_fresh, seed);
    std::size_t hits = 0;
    for (const auto& s : fresh)
        if (violated(s)) ++hits;
    ViolationEstimate est;
    est.n_fresh = n_fresh;
    est.point = static_cast<double>(hits) / static_cast<double>(n_fresh);
    std::tie(est.ci_low, est.ci_high) = binomial_ci(hits, n_fresh, level);
    return est;
}

MethodSpec MethodSpec::parse(const std::string& text, std::int64_t r) {
    std::string name = text;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        name = text.substr(0, colon);
        try {
            r = std::stoll(text.substr(colon + 1));
        } catch (const std::exception&) {
            throw DomainError("bad r suffix in method '" + text + "'");
        }
    }
    MethodSpec spec;
    spec.r = r;
    if (name == "scenario") {
        spec.alg = Alg::Scenario;
        spec.kind = BoundKind::exact_binomial();
    } else if (name == "scenario-floyd") {
        spec.alg = Alg::Scenario;
        spec.kind = BoundKind::floyd();
    } else if (name == "discard") {
        spec.alg = Alg::Discard;
        spec.kind = BoundKind::discard(r);
    } else if (name == "box") {
        spec.alg = Alg::Box;
        spec.kind = BoundKind::exact_binomial();
    } else if (name == "box-floyd") {
        spec.alg = Alg::Box;
        spec.kind = BoundKind::floyd();
    } else if (name == "box-discard") {
        spec.alg = Alg::BoxDiscard;
        spec.kind = BoundKind::discard(r);
    } else if (name == "cascade") {
        spec.alg = Alg::Cascade;
        spec.kind = BoundKind::floyd();
    } else if (name == "cascade-discard") {
        spec.alg = Alg::CascadeDiscard;
        spec.kind = BoundKind::discard(r);
    } else {
        throw DomainError("unknown method '" + text + "'");
    }
    if (spec.r < 0) throw DomainError("r must be >= 0");
    if (spec.r > 0 && spec.alg != Alg::Discard && spec.alg != Alg::BoxDiscard &&
        spec.alg != Alg::CascadeDiscard)
        throw DomainError("method '" + name + "' does not take r");
    return spec;
}

std::string MethodSpec::name() const {
    switch (alg) {
        case Alg::Scenario:
            return kind.family == BoundFamily::Floyd ? "scenario-floyd" : "scenario";
        case Alg::Discard: return "discard:" + std::to_string(r);
        case Alg::Box:
            return kind.family == BoundFamily::Floyd ? "box-floyd" : "box";
        case Alg::BoxDiscard: return "box-discard:" + std::to_string(r);
        case Alg::Cascade: return "cascade";
        case Alg::CascadeDiscard: return "cascade-discard:" + std::to_string(r);
    }
    return "?";
}

namespace {

struct TrialOutcome {
    enum class Tag { Ok, Degenerate } tag = Tag::Ok;
    bool violated = false;   // violation probability > epsilon
    bool straddled = false;  // estimator CI straddled epsilon
    std::string note;
};

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    if (config.trials == 0) throw DomainError("trials must be >= 1 (T = 0 supplied)");
    config.problem.validate();
    config.distribution.validate();
    if (config.method.needs_second_stage() && !config.second_stage)
        throw DomainError("method '" + config.method.name() +
                          "' requires a second stage");
    if (config.second_stage)
        config.second_stage->validate(config.problem.n_x, config.problem.n_delta);

    using Alg = MethodSpec::Alg;
    const auto& method = config.method;
    std::int64_t d = 0;
    switch (method.alg) {
        case Alg::Scenario:
        case Alg::Discard:
            d = static_cast<std::int64_t>(config.problem.n_x);
            break;
        case Alg::Box:
        case Alg::BoxDiscard:
            d = static_cast<std::int64_t>(2 * config.problem.n_delta);
            break;
        case Alg::Cascade:
        case Alg::CascadeDiscard:
            d = static_cast<std::int64_t>(config.problem.n_x + config.second_stage->n_y);
            break;
    }

    ExperimentReport report;
    report.trials = config.trials;
    report.m = config.m;
    report.epsilon = config.epsilon;
    report.method = method.name();
    report.kind = to_string(method.kind);
    report.d = d;
    report.bound_value =
        q_value(method.kind, static_cast<std::int64_t>(config.m), d, config.epsilon);

    // Exact laws for the registered canonical problems.
    if (config.canonical) {
        const auto m64 = static_cast<std::int64_t>(config.m);
        switch (*config.canonical) {
            case CanonicalTag::Max1D:
                if (method.alg == Alg::Scenario)
                    report.exact_law_value = q_exact(m64, 1, config.epsilon);
                else if (method.alg == Alg::Discard)
                    report.exact_law_value = q_exact(m64, method.r + 1, config.epsilon);
                break;
            case CanonicalTag::Interval1D:
                if (method.alg == Alg::Box)
                    report.exact_law_value = q_exact(m64, 2, config.epsilon);
                break;
            case CanonicalTag::Cascade1D:
                if (method.alg == Alg::Cascade)
                    report.exact_law_value = q_exact(m64, 2, config.epsilon);
                break;
        }
    }

    std::vector<TrialOutcome> outcomes(config.trials);
    parallel_trials(config.trials, [&](std::size_t k) {
        TrialOutcome& out = outcomes[k];
        const std::uint64_t trial_seed = derive(config.seed, k);
        const std::vector<Sample> samples = draw(config.distribution, config.m, trial_seed);

        std::vector<double> solution;        // x (or x;y for cascades)
        std::vector<double> x_part, y_part;  // cascade pieces
        try {
            switch (method.alg) {
                case Alg::Scenario: {
                    const LpSolution sol = lp_solve(expand_lp(config.problem, samples));
                    if (sol.status != LpStatus::Optimal)
                        throw AssumptionViolation("sampled program not solvable");
                    solution = sol.x;
                    break;
                }
                case Alg::Discard: {
                    DiscardResult res = discard(config.problem, samples, method.r);
                    solution = res.solution.x;
                    break;
                }
                case Alg::Box: {
                    const Box box = fit_box(samples);
                    solution = robust_lp_over_box(config.problem, box).x;
                    break;
                }
                case Alg::BoxDiscard: {
                    BoxDesignResult res = discard_box(config.problem, samples, method.r,
                                                      config.epsilon, std::nullopt);
                    solution = res.solution.x;
                    break;
                }
                case Alg::Cascade: {
                    CascadeResult res =
                        solve_cascade(config.problem, *config.second_stage, samples,
                                      config.epsilon, std::nullopt, BoundKind::floyd());
                    x_part = res.x;
                    y_part = res.y;
                    solution = res.x;
                    solution.insert(solution.end(), res.y.begin(), res.y.end());
                    break;
                }
                case Alg::CascadeDiscard: {
                    CascadeResult res =
                        discard_cascade(config.problem, *config.second_stage, samples,
                                        method.r, 2, config.epsilon, std::nullopt);
                    x_part = res.x;
                    y_part = res.y;
                    solution = res.x;
                    solution.insert(solution.end(), res.y.begin(), res.y.end());
                    break;
                }
            }
        } catch (const DegenerateRemoval& e) {
            out.tag = TrialOutcome::Tag::Degenerate;
            out.note = e.what();
            return;
        } catch (const DegenerateProblem& e) {
            out.tag = TrialOutcome::Tag::Degenerate;
            out.note = e.what();
            return;
        } catch (const PartialRemoval& e) {
            out.tag = TrialOutcome::Tag::Degenerate;
            out.note = e.what();
            return;
        }

        double violation;
        if (config.canonical) {
            violation = violation_probability_exact_1d(*config.canonical, solution,
                                                       config.distribution);
        } else {
            std::function<bool(const Sample&)> violated;
            if (method.needs_second_stage()) {
                violated = [&](const Sample& delta) {
                    return joint_violation(x_part, y_part, config.problem,
                                           *config.second_stage, delta);
                };
            } else {
                violated = [&](const Sample& delta) {
                    return config.problem.g_max(solution, delta) > 0.0;
                };
            }
            const ViolationEstimate est =
                estimate_violation(violated, config.distribution, config.n_fresh,
                                   derive(trial_seed, 1u << 20));
            violation = est.point;
            out.straddled = est.ci_low <= config.epsilon && config.epsilon <= est.ci_high;
        }
        out.violated = violation > config.epsilon;
    });

    std::string first_degenerate_note;
    for (const auto& out : outcomes) {
        if (out.tag == TrialOutcome::Tag::Degenerate) {
            ++report.degenerate_trials;
            if (first_degenerate_note.empty()) first_degenerate_note = out.note;
        } else {
            if (out.violated) ++report.violation_trials;
            if (out.straddled) ++report.straddle_trials;
        }
    }

    const std::size_t effective = config.trials - report.degenerate_trials;
    if (report.degenerate_trials > 0)
        report.caveats.push_back(std::to_string(report.degenerate_trials) +
                                 " trial(s) degenerate, excluded from the frequency "
                                 "(first: " + first_degenerate_note + ")");
    if (effective == 0) {
        report.verdict = Verdict::Inconclusive;
        report.caveats.push_back("all trials degenerate");
        return report;
    }
    report.empirical_freq =
        static_cast<double>(report.violation_trials) / static_cast<double>(effective);

    const double t_eff = static_cast<double>(effective);
    auto band = [&](double p) { return 3.0 * std::sqrt(p * (1.0 - p) / t_eff); };
    const bool pass_bound =
        report.empirical_freq <= report.bound_value + band(report.bound_value);
    bool pass = pass_bound;
    if (report.exact_law_value) {
        const double law = *report.exact_law_value;
        const bool pass_law = std::abs(report.empirical_freq - law) <= band(law);
        pass = pass_law || pass_bound;
    }
    report.verdict = pass ? Verdict::Pass : Verdict::Fail;

    if (!config.canonical &&
        report.straddle_trials * 100 > config.trials) {  // > 1% of trials
        report.verdict = Verdict::Inconclusive;
        report.caveats.push_back("estimator CI straddled epsilon in " +
                                 std::to_string(report.straddle_trials) +
                                 " trials (> 1%)");
    }
    return report;
}

double ks_statistic_vs_power_law(std::vector<double> values, double exponent) {
    if (values.empty()) throw DomainError("KS statistic needs at least one value");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double clamped = std::min(1.0, std::max(0.0, values[i]));
        const double cdf = std::pow(clamped, exponent);
        stat = std::max(stat, (static_cast<double>(i) + 1.0) / n - cdf);
        stat = std::max(stat, cdf - static_cast<double>(i) / n);
    }
    return stat;
}

double ks_critical(double alpha, std::size_t n) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

KsReport error_distribution_check(CanonicalTag tag, std::int64_t d, std::size_t trials,
                                  std::uint64_t seed) {
    if (trials == 0) throw DomainError("trials must be >= 1");
    const std::int64_t expected_d = tag == CanonicalTag::Max1D ? 1
                                    : tag == CanonicalTag::Interval1D
                                        ? 2
                                        : -1;
    if (expected_d < 0)
        throw DomainError("error_distribution_check is registered for max1d and "
                          "interval1d only");
    if (d != expected_d)
        throw DomainError("d = " + std::to_string(d) + " does not match the canonical "
                          "compression size " + std::to_string(expected_d));

    const ScenarioProblem problem = canonical_problem(tag);
    const DistributionSpec dist = canonical_distribution(tag);

    std::vector<double> violations(trials);
    parallel_trials(trials, [&](std::size_t k) {
        const std::vector<Sample> ms =
            draw(dist, static_cast<std::size_t>(d), derive(seed, k));
        std::vector<double> x;
        if (tag == CanonicalTag::Max1D) {
            const LpSolution sol = lp_solve(expand_lp(problem, ms));
            if (sol.status != LpStatus::Optimal)
                throw AssumptionViolation("canonical d-multisample program not solvable");
            x = sol.x;
        } else {
            x = robust_lp_over_box(problem, fit_box(ms)).x;
        }
        violations[k] = violation_probability_exact_1d(tag, x, dist);
    });

    KsReport report;
    report.trials = trials;
    report.d = d;
    report.statistic = ks_statistic_vs_power_law(violations, static_cast<double>(d));
    report.critical_1pct = ks_critical(0.01, trials);
    if (trials == 1)
        report.verdict = Verdict::Inconclusive;  // degenerate single-point KS
    else
        report.verdict =
            report.statistic < report.critical_1pct ? Verdict::Pass : Verdict::Fail;
    return report;
}

PartitionReport partition_check(CanonicalTag tag, std::size_t m, std::size_t trials,
                                std::uint64_t seed) {
    if (trials == 0) throw DomainError("trials must be >= 1");
    if (m > 12) throw DomainError("partition_check is capped at m <= 12");
    const std::size_t d = tag == CanonicalTag::Max1D ? 1
                          : tag == CanonicalTag::Interval1D ? 2
                                                            : 0;
    if (d == 0)
        throw DomainError("partition_check is registered for max1d and interval1d only");
    if (m < d) throw DomainError("partition_check requires m >= d");

    const ScenarioProblem problem = canonical_problem(tag);
    const DistributionSpec dist = canonical_distribution(tag);

    std::atomic<std::size_t> violations{0};
    parallel_trials(trials, [&](std::size_t k) {
        const std::vector<Sample> ms = draw(dist, m, derive(seed, k));
        std::size_t consistent_subsets = 0;

        std::vector<std::size_t> subset(d);
        // Lexicographic enumeration of all C(m,d) index subsets.
        for (std::size_t i = 0; i < d; ++i) subset[i] = i;
        for (;;) {
            std::vector<double> x;
            if (tag == CanonicalTag::Max1D) {
                const LpSolution sol = lp_solve(expand_lp(problem, ms, subset));
                if (sol.status != LpStatus::Optimal)
                    throw AssumptionViolation("canonical subset program not solvable");
                x = sol.x;
            } else {
                std::vector<Sample> sub;
                for (std::size_t i : subset) sub.push_back(ms[i]);
                x = robust_lp_over_box(problem, fit_box(sub)).x;
            }
            bool consistent = true;
            for (std::size_t i = 0; i < m && consistent; ++i)
                consistent = problem.g_max(x, ms[i]) <= kFeasTol;
            if (consistent) ++consistent_subsets;

            // Advance the combination.
            std::size_t pos = d;
            while (pos > 0 && subset[pos - 1] == m - d + pos - 1) --pos;
            if (pos == 0) break;
            ++subset[pos - 1];
            for (std::size_t i = pos; i < d; ++i) subset[i] = subset[i - 1] + 1;
        }
        if (consistent_subsets != 1) ++violations;
    });

    PartitionReport report;
    report.trials = trials;
    report.violations = violations.load();
    report.verdict = report.violations == 0 ? Verdict::Pass : Verdict::Fail;
    return report;
}

}  // namespace scencert
