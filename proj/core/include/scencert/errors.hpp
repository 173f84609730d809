#ifndef SCENCERT_ERRORS_HPP
#define SCENCERT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scencert {

// Precondition violations on bound queries, distributions, etc.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// epsilon_for / sample_size_for cannot meet the requested confidence.
struct InfeasibleQuery : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical breakdown inside the LP solver (singular basis, cycling guard, ...).
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sampled/robust program infeasible or unbounded: the standing assumption
// (non-empty interior, existing unique minimizer) does not hold.
struct AssumptionViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Second stage of a cascade infeasible for the multisample at hand; a
// certificate would only be valid on the restricted multisample set.
struct FeasibilitySetF : AssumptionViolation {
    using AssumptionViolation::AssumptionViolation;
};

// Compression-set verification failed: the restricted solve does not
// reproduce the full-sample solution, or it breaks sampled constraints.
struct DegenerateProblem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A removed sample is not violated by the final solution, so the discarding
// certificate semantics do not apply.
struct DegenerateRemoval : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Greedy cascade removal ran out of acceptable candidates before reaching r.
struct PartialRemoval : std::runtime_error {
    PartialRemoval(const std::string& what, std::size_t achieved)
        : std::runtime_error(what), achieved_removals(achieved) {}
    std::size_t achieved_removals;
};

// Malformed problem/config file; message carries the offending field path.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace scencert

#endif
