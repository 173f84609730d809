#ifndef SCENCERT_SCENARIO_HPP
#define SCENCERT_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scencert/bounds.hpp"
#include "scencert/lp.hpp"
#include "scencert/sampling.hpp"

// Scenario programs over affine uncertain constraints: expand the sampled
// program into an LP, identify support constraints, extract a compression
// set, run greedy sampling-and-discarding, and attach violation certificates.

namespace scencert {

inline constexpr double kImproveTol = 1e-7;  // support/non-support separation
inline constexpr double kViolTol = 1e-9;     // removed samples must exceed this

// One scalar constraint g_j(x, delta) = (f0 + F delta) . x + h0 + h . delta;
// the problem constraint is the max over j.
struct UncertainAffineConstraint {
    std::vector<double> f0;               // n_x
    std::vector<std::vector<double>> F;   // n_x rows, n_delta columns
    double h0 = 0.0;
    std::vector<double> h;                // n_delta

    double evaluate(const std::vector<double>& x, const Sample& delta) const;
    // Row of the sampled LP: coefficient vector f0 + F delta and rhs -h0 - h . delta.
    LpRow expand(const Sample& delta) const;
};

struct ScenarioProblem {
    std::size_t n_x = 0;
    std::size_t n_delta = 0;
    std::vector<double> cost;
    std::vector<double> var_lower, var_upper;  // empty or +-inf entries = unbounded
    std::vector<UncertainAffineConstraint> constraints;

    void validate() const;  // throws DomainError on dimension mismatch
    double g_max(const std::vector<double>& x, const Sample& delta) const;
};

// LP over the listed sample indices (one row per constraint per sample).
LinearProgram expand_lp(const ScenarioProblem& problem,
                        const std::vector<Sample>& samples,
                        const std::vector<std::size_t>& indices);
LinearProgram expand_lp(const ScenarioProblem& problem,
                        const std::vector<Sample>& samples);

struct ConsistencyRecord {
    std::size_t sample_count = 0;                    // m of the certificate
    std::vector<std::size_t> compression_indices;    // padded to d_apriori
    std::vector<std::size_t> raw_compression_indices;
    std::vector<std::size_t> support_indices;        // support of the full set
    std::size_t d_apriori = 0;
    std::int64_t discarded = 0;                      // r (0 when no discarding)
    bool consistent = false;
};

struct Certificate {
    std::int64_t m = 0;
    std::int64_t d = 0;
    std::int64_t r = 0;
    BoundKind kind;
    double epsilon = 0.0;
    double beta = 0.0;
    bool equality_claimed = false;
    std::vector<std::string> notes;
};

struct ScenarioSolveResult {
    LpSolution solution;
    ConsistencyRecord record;
};

// Solve the sampled program on all m samples; the record carries support and
// compression indices and d_apriori = n_x. Infeasible/unbounded expansions
// raise AssumptionViolation.
ScenarioSolveResult solve_scenario(const ScenarioProblem& problem,
                                   const std::vector<Sample>& samples);

// Sample indices whose removal improves the optimum by more than kImproveTol.
// `active` restricts the constraint set (defaults to all samples); returned
// indices are positions in `samples`.
std::vector<std::size_t> support_constraints(const ScenarioProblem& problem,
                                             const std::vector<Sample>& samples,
                                             const LpSolution& solution);
std::vector<std::size_t> support_constraints(const ScenarioProblem& problem,
                                             const std::vector<Sample>& samples,
                                             const std::vector<std::size_t>& active,
                                             const LpSolution& solution);

// Iterate solve -> support -> restrict until a fixed point, then verify the
// restricted solve reproduces the full solution and satisfies every sampled
// constraint. Raises DegenerateProblem when verification fails.
ConsistencyRecord compression_set(const ScenarioProblem& problem,
                                  const std::vector<Sample>& samples);

// Bound evaluation shared by all certificate producers: exactly one of
// epsilon/beta must be set; the other is derived through module bounds.
Certificate build_certificate(std::int64_t m, std::int64_t d, const BoundKind& kind,
                              std::optional<double> epsilon,
                              std::optional<double> beta,
                              bool equality_claimed = false);

// Attach a certificate to a consistency record (d = record.d_apriori). The VC
// bound is advisory-only and refused here; inconsistent records are refused.
Certificate certify(const ConsistencyRecord& record,
                    std::optional<double> epsilon, std::optional<double> beta,
                    const BoundKind& kind, bool exact_support_asserted = false);

struct DiscardResult {
    LpSolution solution;
    std::vector<std::size_t> removed;
    ConsistencyRecord record;  // record.discarded = r, sample_count = original m
};

// Greedy sampling-and-discarding: r rounds, each removing the active sample
// whose deletion lowers the objective the most (ties to the lowest index).
// Every removed sample must be violated by the final solution, otherwise
// DegenerateRemoval is raised and no certificate applies.
DiscardResult discard(const ScenarioProblem& problem,
                      const std::vector<Sample>& samples, std::int64_t r);

}  // namespace scencert

#endif
