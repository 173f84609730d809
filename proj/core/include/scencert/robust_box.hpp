#ifndef SCENCERT_ROBUST_BOX_HPP
#define SCENCERT_ROBUST_BOX_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "scencert/scenario.hpp"

// Probabilistically robust design: fit the smallest axis-aligned box around
// the samples, solve the robust LP over that box through an exact epigraph
// reformulation, and certify with d = 2 n_delta.

namespace scencert {

struct Box {
    std::vector<double> lower, upper;

    std::size_t dimension() const { return lower.size(); }
    bool contains(const Sample& delta, double tol = 1e-12) const;
};

// Componentwise min/max scan; this is the exact minimizer of the L1 fit.
Box fit_box(const std::vector<Sample>& samples);

// Indices attaining the per-coordinate extremes (ties to the lowest index);
// at most 2 n_delta of them, the compression set of the box fit.
std::vector<std::size_t> fit_box_support(const std::vector<Sample>& samples);

// Worst case of each constraint over the box via per-(constraint, coordinate)
// epigraph variables; exact by construction. The returned x is re-verified
// against explicit corner enumeration for n_delta <= 12 and spot-checked at
// pseudorandom corners above that. Infeasibility raises AssumptionViolation.
LpSolution robust_lp_over_box(const ScenarioProblem& problem, const Box& box);

struct BoxDesignResult {
    LpSolution solution;
    Box box;
    Certificate cert;
    std::vector<std::size_t> support;  // fit_box_support of the inputs
    std::vector<std::size_t> removed;  // discard_box only
};

// Full pipeline. Kind may be ExactBinomial (default, the binomial-tail bound
// carried by the fully supported box fit) or Floyd. Requires m >= 2 n_delta.
BoxDesignResult solve_box_design(const ScenarioProblem& problem,
                                 const std::vector<Sample>& samples,
                                 std::optional<double> epsilon,
                                 std::optional<double> beta,
                                 const BoundKind& kind = BoundKind::exact_binomial(),
                                 bool box_complement_asserted = false);

// Greedy facet removal: r rounds over the current box-support candidates,
// each removing the sample whose deletion shrinks the robust objective the
// most (ties to the lowest index). Removed samples must be violated by the
// final solution or DegenerateRemoval is raised. Certificate kind Discard(r).
BoxDesignResult discard_box(const ScenarioProblem& problem,
                            const std::vector<Sample>& samples, std::int64_t r,
                            std::optional<double> epsilon, std::optional<double> beta);

}  // namespace scencert

#endif
