#include "scencert/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scencert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> all_indices(std::size_t m) {
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    return idx;
}

// Objective of the sampled LP restricted to `active`; -inf when unbounded.
// Removing constraints cannot create infeasibility, so Infeasible here is a
// solver fault.
double restricted_objective(const ScenarioProblem& problem,
                            const std::vector<Sample>& samples,
                            const std::vector<std::size_t>& active) {
    const LpSolution sol = lp_solve_basic(expand_lp(problem, samples, active));
    if (sol.status == LpStatus::Unbounded) return -kInf;
    if (sol.status != LpStatus::Optimal)
        throw SolverFailure("restricted scenario program reported infeasible");
    return sol.objective;
}

}  // namespace

double UncertainAffineConstraint::evaluate(const std::vector<double>& x,
                                           const Sample& delta) const {
    double v = h0;
    for (std::size_t l = 0; l < h.size(); ++l) v += h[l] * delta[l];
    for (std::size_t k = 0; k < f0.size(); ++k) {
        double coeff = f0[k];
        for (std::size_t l = 0; l < delta.size(); ++l) coeff += F[k][l] * delta[l];
        v += coeff * x[k];
    }
    return v;
}

LpRow UncertainAffineConstraint::expand(const Sample& delta) const {
    LpRow row;
    row.coeff.resize(f0.size());
    for (std::size_t k = 0; k < f0.size(); ++k) {
        double coeff = f0[k];
        for (std::size_t l = 0; l < delta.size(); ++l) coeff += F[k][l] * delta[l];
        row.coeff[k] = coeff;
    }
    double rhs = -h0;
    for (std::size_t l = 0; l < h.size(); ++l) rhs -= h[l] * delta[l];
    row.rhs = rhs;
    return row;
}

void ScenarioProblem::validate() const {
    if (n_x == 0) throw DomainError("ScenarioProblem: n_x must be positive");
    if (n_delta == 0) throw DomainError("ScenarioProblem: n_delta must be positive");
    if (cost.size() != n_x) throw DomainError("ScenarioProblem: cost has wrong arity");
    if (!var_lower.empty() && var_lower.size() != n_x)
        throw DomainError("ScenarioProblem: var_lower has wrong arity");
    if (!var_upper.empty() && var_upper.size() != n_x)
        throw DomainError("ScenarioProblem: var_upper has wrong arity");
    if (constraints.empty())
        throw DomainError("ScenarioProblem: constraint list must be nonempty");
    for (std::size_t j = 0; j < constraints.size(); ++j) {
        const auto& c = constraints[j];
        const std::string at = "constraint " + std::to_string(j);
        if (c.f0.size() != n_x) throw DomainError(at + ": f0 has wrong arity");
        if (c.h.size() != n_delta) throw DomainError(at + ": h has wrong arity");
        if (c.F.size() != n_x) throw DomainError(at + ": F has wrong row count");
        for (const auto& row : c.F)
            if (row.size() != n_delta) throw DomainError(at + ": F has ragged rows");
    }
}

double ScenarioProblem::g_max(const std::vector<double>& x, const Sample& delta) const {
    double best = -kInf;
    for (const auto& c : constraints) best = std::max(best, c.evaluate(x, delta));
    return best;
}

LinearProgram expand_lp(const ScenarioProblem& problem,
                        const std::vector<Sample>& samples,
                        const std::vector<std::size_t>& indices) {
    LinearProgram lp;
    lp.cost = problem.cost;
    lp.var_lower = problem.var_lower;
    lp.var_upper = problem.var_upper;
    lp.rows.reserve(indices.size() * problem.constraints.size());
    for (std::size_t i : indices)
        for (const auto& c : problem.constraints) lp.rows.push_back(c.expand(samples[i]));
    return lp;
}

LinearProgram expand_lp(const ScenarioProblem& problem,
                        const std::vector<Sample>& samples) {
    return expand_lp(problem, samples, all_indices(samples.size()));
}

std::vector<std::size_t> support_constraints(const ScenarioProblem& problem,
                                             const std::vector<Sample>& samples,
                                             const std::vector<std::size_t>& active,
                                             const LpSolution& solution) {
    if (solution.status != LpStatus::Optimal)
        throw DomainError("support_constraints requires an optimal base solution");
    std::vector<std::size_t> support;
    std::vector<std::size_t> reduced;
    reduced.reserve(active.size() > 0 ? active.size() - 1 : 0);
    for (std::size_t drop = 0; drop < active.size(); ++drop) {
        reduced.clear();
        for (std::size_t k = 0; k < active.size(); ++k)
            if (k != drop) reduced.push_back(active[k]);
        const double obj = restricted_objective(problem, samples, reduced);
        if (obj < solution.objective - kImproveTol) support.push_back(active[drop]);
    }
    if (support.size() > problem.n_x)
        throw DegenerateProblem("support count " + std::to_string(support.size()) +
                                " exceeds n_x = " + std::to_string(problem.n_x));
    return support;
}

std::vector<std::size_t> support_constraints(const ScenarioProblem& problem,
                                             const std::vector<Sample>& samples,
                                             const LpSolution& solution) {
    return support_constraints(problem, samples, all_indices(samples.size()), solution);
}

namespace {

struct CompressionInternals {
    LpSolution full;
    ConsistencyRecord record;
};

CompressionInternals compression_impl(const ScenarioProblem& problem,
                                      const std::vector<Sample>& samples) {
    problem.validate();
    const std::size_t m = samples.size();
    if (m == 0) throw DomainError("at least one sample required (m >= 1)");
    for (const auto& s : samples)
        if (s.size() != problem.n_delta)
            throw DomainError("sample dimension does not match n_delta");

    const LpSolution full = lp_solve(expand_lp(problem, samples));
    if (full.status == LpStatus::Infeasible)
        throw AssumptionViolation("sampled program infeasible: feasibility region "
                                  "lacks a non-empty interior");
    if (full.status == LpStatus::Unbounded)
        throw AssumptionViolation("sampled program unbounded: minimizer does not exist");

    ConsistencyRecord rec;
    rec.sample_count = m;
    rec.d_apriori = problem.n_x;

    // Fixed-point iteration: support of the current index set, then restrict.
    std::vector<std::size_t> current = all_indices(m);
    LpSolution current_sol = full;
    bool first_pass = true;
    for (;;) {
        std::vector<std::size_t> supp =
            support_constraints(problem, samples, current, current_sol);
        if (first_pass) {
            rec.support_indices = supp;
            first_pass = false;
        }
        if (supp.size() == current.size()) break;
        current = std::move(supp);
        current_sol = lp_solve(expand_lp(problem, samples, current));
        if (current_sol.status != LpStatus::Optimal)
            throw DegenerateProblem("restricted scenario program not solvable "
                                    "during compression iteration");
    }

    // Verification: the restricted solve must reproduce the full solution and
    // satisfy every sampled constraint.
    for (std::size_t k = 0; k < problem.n_x; ++k)
        if (std::abs(current_sol.x[k] - full.x[k]) > 1e-7)
            throw DegenerateProblem("compression-set solve does not reproduce the "
                                    "full-sample solution (coordinate " +
                                    std::to_string(k) + ")");
    for (std::size_t i = 0; i < m; ++i)
        if (problem.g_max(current_sol.x, samples[i]) > kFeasTol)
            throw DegenerateProblem("compression-set solution violates sample " +
                                    std::to_string(i));

    rec.raw_compression_indices = current;
    rec.compression_indices = current;
    const std::size_t target = std::min<std::size_t>(problem.n_x, m);
    for (std::size_t i = 0; i < m && rec.compression_indices.size() < target; ++i) {
        if (std::find(current.begin(), current.end(), i) == current.end())
            rec.compression_indices.push_back(i);
    }
    std::sort(rec.compression_indices.begin(), rec.compression_indices.end());
    rec.consistent = true;
    return {full, rec};
}

}  // namespace

ConsistencyRecord compression_set(const ScenarioProblem& problem,
                                  const std::vector<Sample>& samples) {
    return compression_impl(problem, samples).record;
}

ScenarioSolveResult solve_scenario(const ScenarioProblem& problem,
                                   const std::vector<Sample>& samples) {
    CompressionInternals ci = compression_impl(problem, samples);
    return {std::move(ci.full), std::move(ci.record)};
}

Certificate build_certificate(std::int64_t m, std::int64_t d, const BoundKind& kind,
                              std::optional<double> epsilon,
                              std::optional<double> beta, bool equality_claimed) {
    if (epsilon.has_value() == beta.has_value())
        throw DomainError("exactly one of epsilon/beta must be supplied");
    if (kind.family == BoundFamily::VC)
        throw DomainError("the VC bound is advisory-only and cannot back a certificate");

    Certificate cert;
    cert.m = m;
    cert.d = d;
    cert.r = (kind.family == BoundFamily::Discard ||
              kind.family == BoundFamily::DiscardUnique)
                 ? kind.r
                 : 0;
    cert.kind = kind;
    if (epsilon) {
        cert.epsilon = *epsilon;
        cert.beta = q_value(kind, m, d, *epsilon);
    } else {
        cert.epsilon = epsilon_for(m, d, *beta, kind);
        cert.beta = q_value(kind, m, d, cert.epsilon);
        cert.notes.push_back("epsilon derived by bisection from requested beta = " +
                             std::to_string(*beta));
    }
    cert.equality_claimed = equality_claimed && kind.family == BoundFamily::ExactBinomial;
    if (cert.beta >= 1.0)
        cert.notes.push_back("vacuous certificate: beta clamps to 1 at this (m, d, epsilon)");
    return cert;
}

Certificate certify(const ConsistencyRecord& record, std::optional<double> epsilon,
                    std::optional<double> beta, const BoundKind& kind,
                    bool exact_support_asserted) {
    if (!record.consistent)
        throw DomainError("cannot certify an inconsistent record: the compression "
                          "assumption does not hold");
    const bool discard_kind = kind.family == BoundFamily::Discard ||
                              kind.family == BoundFamily::DiscardUnique;
    if (record.discarded > 0 && (!discard_kind || kind.r != record.discarded))
        throw DomainError("record has r = " + std::to_string(record.discarded) +
                          " discarded samples; certificate kind must match");
    if (discard_kind && kind.r != record.discarded)
        throw DomainError("discard kind r does not match the record");

    Certificate cert = build_certificate(static_cast<std::int64_t>(record.sample_count),
                                         static_cast<std::int64_t>(record.d_apriori),
                                         kind, epsilon, beta, exact_support_asserted);
    cert.notes.push_back("d is a-priori; observed support count = " +
                         std::to_string(record.support_indices.size()));
    return cert;
}

DiscardResult discard(const ScenarioProblem& problem,
                      const std::vector<Sample>& samples, std::int64_t r) {
    problem.validate();
    if (r < 0) throw DomainError("r must be >= 0");
    const std::size_t m = samples.size();
    if (m < problem.n_x + static_cast<std::size_t>(r))
        throw DomainError("discard requires m >= n_x + r");

    std::vector<std::size_t> active = all_indices(m);
    std::vector<std::size_t> removed;
    double prev_objective = kInf;

    for (std::int64_t round = 0; round < r; ++round) {
        const LpSolution cur = lp_solve(expand_lp(problem, samples, active));
        if (cur.status != LpStatus::Optimal)
            throw AssumptionViolation("scenario program not solvable during discarding");
        if (round > 0 && cur.objective > prev_objective + 1e-9)
            throw SolverFailure("objective increased across a discard round");
        prev_objective = cur.objective;

        // Candidates are the support samples; only their removal can improve.
        std::size_t best = active.front();
        double best_obj = kInf;
        bool any_improvement = false;
        std::vector<std::size_t> reduced;
        for (std::size_t drop = 0; drop < active.size(); ++drop) {
            reduced.clear();
            for (std::size_t k = 0; k < active.size(); ++k)
                if (k != drop) reduced.push_back(active[k]);
            const double obj = restricted_objective(problem, samples, reduced);
            if (obj < cur.objective - kImproveTol && obj < best_obj) {
                best_obj = obj;
                best = active[drop];
                any_improvement = true;
            }
        }
        if (!any_improvement) best = active.front();  // zero-improvement tie: lowest index
        removed.push_back(best);
        active.erase(std::find(active.begin(), active.end(), best));
    }

    // Final solve and compression on the retained samples; certificate m stays
    // the original sample count.
    std::vector<Sample> retained;
    retained.reserve(active.size());
    for (std::size_t i : active) retained.push_back(samples[i]);
    CompressionInternals ci = compression_impl(problem, retained);
    if (!removed.empty() && ci.full.objective > prev_objective + 1e-9)
        throw SolverFailure("objective increased after the last discard round");

    // Map retained-relative indices back to positions in the original list.
    auto remap = [&active](std::vector<std::size_t>& idx) {
        for (auto& v : idx) v = active[v];
    };
    remap(ci.record.compression_indices);
    remap(ci.record.raw_compression_indices);
    remap(ci.record.support_indices);
    ci.record.sample_count = m;
    ci.record.discarded = r;

    std::vector<std::size_t> unviolated;
    for (std::size_t j : removed)
        if (problem.g_max(ci.full.x, samples[j]) <= kViolTol) unviolated.push_back(j);
    if (!unviolated.empty()) {
        std::string msg = "removed sample(s) not violated by the final solution:";
        for (std::size_t j : unviolated) msg += " " + std::to_string(j);
        throw DegenerateRemoval(msg);
    }

    return {std::move(ci.full), std::move(removed), std::move(ci.record)};
}

}  // namespace scencert
