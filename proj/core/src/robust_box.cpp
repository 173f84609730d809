#include "scencert/robust_box.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scencert/sampling.hpp"

namespace scencert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kCornerCheckCap = 12;  // 4096 corners

std::vector<std::size_t> all_indices(std::size_t m) {
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    return idx;
}

Box fit_box_of(const std::vector<Sample>& samples, const std::vector<std::size_t>& idx) {
    if (idx.empty()) throw DomainError("fit_box requires at least one sample");
    const std::size_t dim = samples[idx.front()].size();
    Box box;
    box.lower.assign(dim, kInf);
    box.upper.assign(dim, -kInf);
    for (std::size_t i : idx) {
        if (samples[i].size() != dim) throw DomainError("ragged sample list");
        for (std::size_t l = 0; l < dim; ++l) {
            box.lower[l] = std::min(box.lower[l], samples[i][l]);
            box.upper[l] = std::max(box.upper[l], samples[i][l]);
        }
    }
    return box;
}

void corner_verify(const ScenarioProblem& problem, const Box& box,
                   const std::vector<double>& x) {
    const std::size_t dim = box.dimension();
    Sample corner(dim);
    auto check = [&](std::uint64_t mask) {
        for (std::size_t l = 0; l < dim; ++l)
            corner[l] = (mask >> l) & 1 ? box.upper[l] : box.lower[l];
        if (problem.g_max(x, corner) > kFeasTol)
            throw SolverFailure("epigraph solution violates a box corner; "
                                "reformulation inconsistent");
    };
    if (dim <= kCornerCheckCap) {
        for (std::uint64_t mask = 0; mask < (1ULL << dim); ++mask) check(mask);
    } else {
        // Too many corners to enumerate: spot-check a fixed pseudorandom set.
        RandomStream rng(0x0b0c0d0eULL);
        for (int k = 0; k < 4096; ++k) check(rng.next_u64());
    }
}

}  // namespace

bool Box::contains(const Sample& delta, double tol) const {
    for (std::size_t l = 0; l < lower.size(); ++l)
        if (delta[l] < lower[l] - tol || delta[l] > upper[l] + tol) return false;
    return true;
}

Box fit_box(const std::vector<Sample>& samples) {
    return fit_box_of(samples, all_indices(samples.size()));
}

std::vector<std::size_t> fit_box_support(const std::vector<Sample>& samples) {
    if (samples.empty()) throw DomainError("fit_box_support requires samples");
    const std::size_t dim = samples.front().size();
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < dim; ++l) {
        std::size_t imin = 0, imax = 0;
        for (std::size_t i = 1; i < samples.size(); ++i) {
            if (samples[i][l] < samples[imin][l]) imin = i;
            if (samples[i][l] > samples[imax][l]) imax = i;
        }
        out.push_back(imin);
        out.push_back(imax);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

LpSolution robust_lp_over_box(const ScenarioProblem& problem, const Box& box) {
    problem.validate();
    const std::size_t dim = box.dimension();
    if (dim != problem.n_delta)
        throw DomainError("box dimension does not match n_delta");
    for (std::size_t l = 0; l < dim; ++l)
        if (box.lower[l] > box.upper[l])
            throw DomainError("box has crossed bounds at coordinate " + std::to_string(l));

    const std::size_t n_x = problem.n_x;
    const std::size_t n_c = problem.constraints.size();
    const std::size_t n_t = n_c * dim;  // one epigraph variable per (j, l)

    // Variables (x, t); t_{j,l} >= w_l(x) * lower_l and >= w_l(x) * upper_l
    // with w(x) = F_j^T x + h_j, and f0_j . x + h0_j + sum_l t_{j,l} <= 0.
    LinearProgram lp;
    lp.cost.assign(n_x + n_t, 0.0);
    std::copy(problem.cost.begin(), problem.cost.end(), lp.cost.begin());
    lp.var_lower.assign(n_x + n_t, -kInf);
    lp.var_upper.assign(n_x + n_t, kInf);
    for (std::size_t k = 0; k < n_x; ++k) {
        if (!problem.var_lower.empty()) lp.var_lower[k] = problem.var_lower[k];
        if (!problem.var_upper.empty()) lp.var_upper[k] = problem.var_upper[k];
    }

    for (std::size_t j = 0; j < n_c; ++j) {
        const auto& c = problem.constraints[j];
        LpRow main;
        main.coeff.assign(n_x + n_t, 0.0);
        for (std::size_t k = 0; k < n_x; ++k) main.coeff[k] = c.f0[k];
        for (std::size_t l = 0; l < dim; ++l) main.coeff[n_x + j * dim + l] = 1.0;
        main.rhs = -c.h0;
        lp.rows.push_back(std::move(main));

        for (std::size_t l = 0; l < dim; ++l) {
            for (const double endpoint : {box.lower[l], box.upper[l]}) {
                LpRow row;  // endpoint * w_l(x) - t_{j,l} <= 0
                row.coeff.assign(n_x + n_t, 0.0);
                for (std::size_t k = 0; k < n_x; ++k)
                    row.coeff[k] = endpoint * c.F[k][l];
                row.coeff[n_x + j * dim + l] = -1.0;
                row.rhs = -endpoint * c.h[l];
                lp.rows.push_back(std::move(row));
            }
        }
    }

    LpSolution sol = lp_solve(lp);
    if (sol.status == LpStatus::Infeasible)
        throw AssumptionViolation("robust program over the box infeasible: "
                                  "feasibility region lacks a non-empty interior");
    if (sol.status == LpStatus::Unbounded)
        throw AssumptionViolation("robust program over the box unbounded");

    LpSolution out;
    out.status = LpStatus::Optimal;
    out.x.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n_x));
    out.objective = 0.0;
    for (std::size_t k = 0; k < n_x; ++k) out.objective += problem.cost[k] * out.x[k];
    corner_verify(problem, box, out.x);
    return out;
}

namespace {

BoxDesignResult box_pipeline(const ScenarioProblem& problem,
                             const std::vector<Sample>& samples,
                             const std::vector<std::size_t>& active) {
    BoxDesignResult res;
    res.box = fit_box_of(samples, active);

    std::vector<Sample> kept;
    kept.reserve(active.size());
    for (std::size_t i : active) kept.push_back(samples[i]);
    std::vector<std::size_t> supp = fit_box_support(kept);
    for (auto& v : supp) v = active[v];
    res.support = std::move(supp);

    res.solution = robust_lp_over_box(problem, res.box);
    return res;
}

}  // namespace

BoxDesignResult solve_box_design(const ScenarioProblem& problem,
                                 const std::vector<Sample>& samples,
                                 std::optional<double> epsilon,
                                 std::optional<double> beta, const BoundKind& kind,
                                 bool box_complement_asserted) {
    problem.validate();
    const std::size_t m = samples.size();
    const std::size_t d = 2 * problem.n_delta;
    if (m < d) throw DomainError("box design requires m >= 2 n_delta");
    if (kind.family != BoundFamily::ExactBinomial && kind.family != BoundFamily::Floyd)
        throw DomainError("box design certificates admit the exact and floyd kinds "
                          "(use discard_box for sample removal)");

    BoxDesignResult res = box_pipeline(problem, samples, all_indices(m));
    res.cert = build_certificate(static_cast<std::int64_t>(m),
                                 static_cast<std::int64_t>(d), kind, epsilon, beta,
                                 box_complement_asserted);
    res.cert.notes.push_back("d = 2 n_delta from the box fit; the bound holds for "
                             "every feasible point of the robust program, not only "
                             "the minimizer");
    if (problem.n_delta > kCornerCheckCap)
        res.cert.notes.push_back("corner verification spot-checked only "
                                 "(n_delta > 12)");
    return res;
}

BoxDesignResult discard_box(const ScenarioProblem& problem,
                            const std::vector<Sample>& samples, std::int64_t r,
                            std::optional<double> epsilon, std::optional<double> beta) {
    problem.validate();
    if (r < 0) throw DomainError("r must be >= 0");
    const std::size_t m = samples.size();
    const std::size_t d = 2 * problem.n_delta;
    if (m < d + static_cast<std::size_t>(r))
        throw DomainError("discard_box requires m >= 2 n_delta + r");

    std::vector<std::size_t> active = all_indices(m);
    std::vector<std::size_t> removed;
    double prev_objective = kInf;

    for (std::int64_t round = 0; round < r; ++round) {
        BoxDesignResult cur = box_pipeline(problem, samples, active);
        if (round > 0 && cur.solution.objective > prev_objective + 1e-9)
            throw SolverFailure("robust objective increased across a discard round");
        prev_objective = cur.solution.objective;

        // Candidates sit on the current box facets; removing anything else
        // leaves the box (and hence the robust program) unchanged.
        std::size_t best = cur.support.front();
        double best_obj = kInf;
        bool first = true;
        std::vector<std::size_t> reduced;
        for (std::size_t cand : cur.support) {
            reduced.clear();
            for (std::size_t i : active)
                if (i != cand) reduced.push_back(i);
            const BoxDesignResult trial = box_pipeline(problem, samples, reduced);
            if (first || trial.solution.objective < best_obj) {
                best_obj = trial.solution.objective;
                best = cand;
                first = false;
            }
        }
        removed.push_back(best);
        active.erase(std::find(active.begin(), active.end(), best));
    }

    BoxDesignResult res = box_pipeline(problem, samples, active);
    if (!removed.empty() && res.solution.objective > prev_objective + 1e-9)
        throw SolverFailure("robust objective increased after the last discard round");
    res.removed = removed;
    res.cert = build_certificate(static_cast<std::int64_t>(m),
                                 static_cast<std::int64_t>(d), BoundKind::discard(r),
                                 epsilon, beta);
    res.cert.notes.push_back("d = 2 n_delta from the box fit");

    std::vector<std::size_t> unviolated;
    for (std::size_t j : removed)
        if (problem.g_max(res.solution.x, samples[j]) <= kViolTol)
            unviolated.push_back(j);
    if (!unviolated.empty()) {
        std::string msg = "removed sample(s) not violated by the final solution:";
        for (std::size_t j : unviolated) msg += " " + std::to_string(j);
        throw DegenerateRemoval(msg);
    }
    return res;
}

}  // namespace scencert
