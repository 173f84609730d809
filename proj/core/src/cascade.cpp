#include "scencert/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace scencert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> all_indices(std::size_t m) {
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    return idx;
}

std::vector<Sample> select(const std::vector<Sample>& samples,
                           const std::vector<std::size_t>& idx) {
    std::vector<Sample> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(samples[i]);
    return out;
}

}  // namespace

double CoupledConstraint::evaluate(const std::vector<double>& y,
                                   const std::vector<double>& x,
                                   const Sample& delta) const {
    double v = t;
    for (std::size_t l = 0; l < s.size(); ++l) v += s[l] * delta[l];
    for (std::size_t k = 0; k < q.size(); ++k) {
        double coeff = q[k];
        for (std::size_t l = 0; l < delta.size(); ++l) coeff += Q[k][l] * delta[l];
        v += coeff * x[k];
    }
    for (std::size_t k = 0; k < a0.size(); ++k) {
        double coeff = a0[k];
        for (std::size_t l = 0; l < delta.size(); ++l) coeff += A[k][l] * delta[l];
        v += coeff * y[k];
    }
    return v;
}

void SecondStageSpec::validate(std::size_t n_x, std::size_t n_delta) const {
    if (n_y == 0) throw DomainError("SecondStageSpec: n_y must be positive");
    if (cost_y.size() != n_y) throw DomainError("SecondStageSpec: cost_y has wrong arity");
    if (!y_lower.empty() && y_lower.size() != n_y)
        throw DomainError("SecondStageSpec: y_lower has wrong arity");
    if (!y_upper.empty() && y_upper.size() != n_y)
        throw DomainError("SecondStageSpec: y_upper has wrong arity");
    if (constraints.empty())
        throw DomainError("SecondStageSpec: constraint list must be nonempty");
    for (std::size_t j = 0; j < constraints.size(); ++j) {
        const auto& c = constraints[j];
        const std::string at = "second-stage constraint " + std::to_string(j);
        if (c.a0.size() != n_y) throw DomainError(at + ": a0 has wrong arity");
        if (c.q.size() != n_x) throw DomainError(at + ": q has wrong arity");
        if (c.s.size() != n_delta) throw DomainError(at + ": s has wrong arity");
        if (c.A.size() != n_y) throw DomainError(at + ": A has wrong row count");
        for (const auto& row : c.A)
            if (row.size() != n_delta) throw DomainError(at + ": A has ragged rows");
        if (c.Q.size() != n_x) throw DomainError(at + ": Q has wrong row count");
        for (const auto& row : c.Q)
            if (row.size() != n_delta) throw DomainError(at + ": Q has ragged rows");
    }
}

double SecondStageSpec::g_max(const std::vector<double>& y, const std::vector<double>& x,
                              const Sample& delta) const {
    double best = -kInf;
    for (const auto& c : constraints) best = std::max(best, c.evaluate(y, x, delta));
    return best;
}

ScenarioProblem second_stage_as_scenario(const SecondStageSpec& spec,
                                         const std::vector<double>& x,
                                         std::size_t n_delta) {
    ScenarioProblem p;
    p.n_x = spec.n_y;
    p.n_delta = n_delta;
    p.cost = spec.cost_y;
    p.var_lower = spec.y_lower;
    p.var_upper = spec.y_upper;
    p.constraints.reserve(spec.constraints.size());
    for (const auto& c : spec.constraints) {
        UncertainAffineConstraint u;
        u.f0 = c.a0;
        u.F = c.A;
        // Constant and delta-linear parts absorb the fixed x.
        u.h0 = c.t;
        for (std::size_t k = 0; k < c.q.size(); ++k) u.h0 += c.q[k] * x[k];
        u.h = c.s;
        for (std::size_t l = 0; l < n_delta; ++l)
            for (std::size_t k = 0; k < x.size(); ++k) u.h[l] += x[k] * c.Q[k][l];
        p.constraints.push_back(std::move(u));
    }
    return p;
}

bool joint_violation(const std::vector<double>& x, const std::vector<double>& y,
                     const ScenarioProblem& first, const SecondStageSpec& second,
                     const Sample& delta) {
    return first.g_max(x, delta) > 0.0 || second.g_max(y, x, delta) > 0.0;
}

namespace {

struct CascadeSolve {
    LpSolution first_sol, second_sol;
    ConsistencyRecord first_rec, second_rec;  // indices relative to the handed list
};

// Both stages over the listed samples; records come from the scenario module.
CascadeSolve run_cascade(const ScenarioProblem& first, const SecondStageSpec& second,
                         const std::vector<Sample>& samples) {
    CascadeSolve cs;
    ScenarioSolveResult s1 = solve_scenario(first, samples);
    cs.first_sol = std::move(s1.solution);
    cs.first_rec = std::move(s1.record);

    const ScenarioProblem stage2 = second_stage_as_scenario(second, cs.first_sol.x,
                                                            first.n_delta);
    try {
        ScenarioSolveResult s2 = solve_scenario(stage2, samples);
        cs.second_sol = std::move(s2.solution);
        cs.second_rec = std::move(s2.record);
    } catch (const AssumptionViolation& e) {
        throw FeasibilitySetF(std::string("second stage failed at the stage-one "
                                          "minimizer: ") +
                              e.what() +
                              " (certificate only valid on the restricted "
                              "multisample set)");
    }
    return cs;
}

// Objectives only, no compression bookkeeping; used by the removal search.
std::pair<double, double> cascade_objectives(const ScenarioProblem& first,
                                             const SecondStageSpec& second,
                                             const std::vector<Sample>& samples) {
    const LpSolution s1 = lp_solve(expand_lp(first, samples));
    if (s1.status != LpStatus::Optimal)
        throw AssumptionViolation("stage-one program not solvable");
    const ScenarioProblem stage2 = second_stage_as_scenario(second, s1.x, first.n_delta);
    const LpSolution s2 = lp_solve(expand_lp(stage2, samples));
    if (s2.status != LpStatus::Optimal)
        throw FeasibilitySetF("second stage infeasible for this multisample");
    return {s1.objective, s2.objective};
}

CascadeResult assemble(const ScenarioProblem& first, const SecondStageSpec& second,
                       const std::vector<Sample>& samples,
                       const std::vector<std::size_t>& active,
                       std::vector<std::size_t> removed, std::int64_t r,
                       std::optional<double> epsilon, std::optional<double> beta,
                       const BoundKind& kind) {
    const std::size_t m = samples.size();
    const std::size_t d = first.n_x + second.n_y;

    const std::vector<Sample> kept = select(samples, active);
    CascadeSolve cs = run_cascade(first, second, kept);

    CascadeResult res;
    res.x = cs.first_sol.x;
    res.y = cs.second_sol.x;
    res.first_objective = cs.first_sol.objective;
    res.second_objective = cs.second_sol.objective;
    res.removed = std::move(removed);

    auto remap = [&active](const std::vector<std::size_t>& idx) {
        std::vector<std::size_t> out;
        out.reserve(idx.size());
        for (std::size_t v : idx) out.push_back(active[v]);
        return out;
    };
    res.first_support = remap(cs.first_rec.support_indices);
    res.second_support = remap(cs.second_rec.support_indices);

    // Union of the per-stage raw compression sets, padded lowest-index-first
    // (over the retained samples) up to d = n_x + n_y.
    std::set<std::size_t> uni;
    for (std::size_t v : remap(cs.first_rec.raw_compression_indices)) uni.insert(v);
    for (std::size_t v : remap(cs.second_rec.raw_compression_indices)) uni.insert(v);
    for (std::size_t i : active) {
        if (uni.size() >= std::min<std::size_t>(d, active.size())) break;
        uni.insert(i);
    }
    res.union_compression.assign(uni.begin(), uni.end());
    if (res.union_compression.size() > d)
        throw DegenerateProblem("union compression set exceeds n_x + n_y");

    // Replay both stages on the union alone and check joint consistency on
    // every retained sample.
    const std::vector<Sample> union_samples = select(samples, res.union_compression);
    const LpSolution r1 = lp_solve(expand_lp(first, union_samples));
    if (r1.status != LpStatus::Optimal)
        throw DegenerateProblem("stage-one replay on the union compression set failed");
    for (std::size_t k = 0; k < first.n_x; ++k)
        if (std::abs(r1.x[k] - res.x[k]) > 1e-7)
            throw DegenerateProblem("stage-one replay does not reproduce x_m");
    const ScenarioProblem stage2_replay =
        second_stage_as_scenario(second, r1.x, first.n_delta);
    const LpSolution r2 = lp_solve(expand_lp(stage2_replay, union_samples));
    if (r2.status != LpStatus::Optimal)
        throw DegenerateProblem("stage-two replay on the union compression set failed");
    for (std::size_t k = 0; k < second.n_y; ++k)
        if (std::abs(r2.x[k] - res.y[k]) > 1e-7)
            throw DegenerateProblem("stage-two replay does not reproduce y_m");
    for (std::size_t i : active) {
        if (first.g_max(res.x, samples[i]) > kFeasTol ||
            second.g_max(res.y, res.x, samples[i]) > kFeasTol)
            throw DegenerateProblem("cascade solution violates retained sample " +
                                    std::to_string(i));
    }

    if (kind.family != BoundFamily::Floyd && kind.family != BoundFamily::Discard)
        throw DomainError("cascade certificates admit only the floyd and discard "
                          "bound kinds (the tight binomial bound does not apply)");
    if (kind.family == BoundFamily::Discard && kind.r != r)
        throw DomainError("discard kind r does not match the removal count");
    res.cert = build_certificate(static_cast<std::int64_t>(m),
                                 static_cast<std::int64_t>(d), kind, epsilon, beta);
    res.cert.r = r;
    res.cert.notes.push_back("joint certificate for the cascade; d = n_x + n_y");
    return res;
}

}  // namespace

CascadeResult solve_cascade(const ScenarioProblem& first, const SecondStageSpec& second,
                            const std::vector<Sample>& samples,
                            std::optional<double> epsilon, std::optional<double> beta,
                            const BoundKind& kind) {
    first.validate();
    second.validate(first.n_x, first.n_delta);
    const std::size_t m = samples.size();
    if (m < first.n_x + second.n_y)
        throw DomainError("cascade requires m >= n_x + n_y");
    return assemble(first, second, samples, all_indices(m), {}, 0, epsilon, beta, kind);
}

CascadeResult discard_cascade(const ScenarioProblem& first, const SecondStageSpec& second,
                              const std::vector<Sample>& samples, std::int64_t r,
                              int target_stage, std::optional<double> epsilon,
                              std::optional<double> beta) {
    first.validate();
    second.validate(first.n_x, first.n_delta);
    if (r < 0) throw DomainError("r must be >= 0");
    if (target_stage != 1 && target_stage != 2)
        throw DomainError("target_stage must be 1 or 2");
    const std::size_t m = samples.size();
    if (m < first.n_x + second.n_y + static_cast<std::size_t>(r))
        throw DomainError("discard_cascade requires m >= n_x + n_y + r");

    std::vector<std::size_t> active = all_indices(m);
    std::vector<std::size_t> removed;

    for (std::int64_t round = 0; round < r; ++round) {
        const auto [obj1, obj2] = cascade_objectives(first, second, select(samples, active));
        const double target = target_stage == 1 ? obj1 : obj2;

        std::size_t best = m;
        double best_obj = kInf;
        std::vector<std::size_t> reduced;
        for (std::size_t drop = 0; drop < active.size(); ++drop) {
            reduced.clear();
            for (std::size_t k = 0; k < active.size(); ++k)
                if (k != drop) reduced.push_back(active[k]);
            double cand;
            try {
                const auto [o1, o2] = cascade_objectives(first, second,
                                                         select(samples, reduced));
                cand = target_stage == 1 ? o1 : o2;
            } catch (const FeasibilitySetF&) {
                continue;  // removal breaks stage-two feasibility: unacceptable
            }
            // Accepted only on a strict decrease of the target objective.
            if (cand < target - 1e-9 && cand < best_obj) {
                best_obj = cand;
                best = active[drop];
            }
        }
        if (best == m)
            throw PartialRemoval("no removal lowers the stage-" +
                                     std::to_string(target_stage) +
                                     " objective; achieved r' = " +
                                     std::to_string(round) + " < r = " +
                                     std::to_string(r),
                                 static_cast<std::size_t>(round));
        removed.push_back(best);
        active.erase(std::find(active.begin(), active.end(), best));
    }

    CascadeResult res = assemble(first, second, samples, active, removed, r, epsilon,
                                 beta, BoundKind::discard(r));

    std::vector<std::size_t> unviolated;
    for (std::size_t j : res.removed)
        if (!joint_violation(res.x, res.y, first, second, samples[j]))
            unviolated.push_back(j);
    if (!unviolated.empty()) {
        std::string msg = "removed sample(s) not jointly violated:";
        for (std::size_t j : unviolated) msg += " " + std::to_string(j);
        throw DegenerateRemoval(msg);
    }
    return res;
}

}  // namespace scencert
