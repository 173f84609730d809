#ifndef SCENCERT_CASCADE_HPP
#define SCENCERT_CASCADE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "scencert/scenario.hpp"

// Two-stage cascading scenario programs: stage one is an ordinary scenario
// program in x; stage two is a scenario program in y parameterized by the
// stage-one minimizer, over the SAME samples. The joint certificate uses
// d = n_x + n_y and the union of the per-stage compression sets.

namespace scencert {

// g~(y, x, delta) = (a0 + A delta) . y + x^T Q delta + q . x + s . delta + t.
// Affine in y for fixed (x, delta); the x-delta coupling may be bilinear.
struct CoupledConstraint {
    std::vector<double> a0;               // n_y
    std::vector<std::vector<double>> A;   // n_y rows, n_delta columns
    std::vector<std::vector<double>> Q;   // n_x rows, n_delta columns
    std::vector<double> q;                // n_x
    std::vector<double> s;                // n_delta
    double t = 0.0;

    double evaluate(const std::vector<double>& y, const std::vector<double>& x,
                    const Sample& delta) const;
};

struct SecondStageSpec {
    std::size_t n_y = 0;
    std::vector<double> cost_y;
    std::vector<double> y_lower, y_upper;
    std::vector<CoupledConstraint> constraints;

    void validate(std::size_t n_x, std::size_t n_delta) const;
    double g_max(const std::vector<double>& y, const std::vector<double>& x,
                 const Sample& delta) const;
};

// Stage two with x substituted is an ordinary scenario program in y.
ScenarioProblem second_stage_as_scenario(const SecondStageSpec& spec,
                                         const std::vector<double>& x,
                                         std::size_t n_delta);

struct CascadeResult {
    std::vector<double> x, y;
    double first_objective = 0.0;
    double second_objective = 0.0;
    Certificate cert;
    std::vector<std::size_t> first_support, second_support;
    std::vector<std::size_t> union_compression;  // padded to n_x + n_y
    std::vector<std::size_t> removed;            // discard_cascade only
};

// Solve the cascade and certify jointly. Only the Floyd and Discard bound
// kinds are admissible (the tight binomial bound does not carry over to
// cascades). Stage-two infeasibility raises FeasibilitySetF; a failed replay
// of the union compression set raises DegenerateProblem.
CascadeResult solve_cascade(const ScenarioProblem& first, const SecondStageSpec& second,
                            const std::vector<Sample>& samples,
                            std::optional<double> epsilon, std::optional<double> beta,
                            const BoundKind& kind = BoundKind::floyd());

// Strict joint violation event (tolerance zero: violation is an open event).
bool joint_violation(const std::vector<double>& x, const std::vector<double>& y,
                     const ScenarioProblem& first, const SecondStageSpec& second,
                     const Sample& delta);

// Greedy removal driven by the target stage (1 or 2, default the last): a
// candidate is accepted only if re-running the whole cascade without it
// strictly lowers that stage's objective. Raises PartialRemoval when fewer
// than r acceptable candidates exist, DegenerateRemoval when a removed sample
// is not jointly violated by the final pair.
CascadeResult discard_cascade(const ScenarioProblem& first, const SecondStageSpec& second,
                              const std::vector<Sample>& samples, std::int64_t r,
                              int target_stage, std::optional<double> epsilon,
                              std::optional<double> beta);

}  // namespace scencert

#endif
