#ifndef SCENCERT_LP_HPP
#define SCENCERT_LP_HPP

#include <cstddef>
#include <vector>

#include "scencert/errors.hpp"

// Dense LP solver for desk-scale problems (n_x up to ~50, rows up to ~10^4):
// many inequality rows over few variables. Two-phase primal simplex on the
// condensed dictionary (memory is rows x vars, slack columns are implicit)
// with Bland's anti-cycling rule, plus a lexicographic refinement pass so
// that identical inputs always yield the one minimizer that is smallest in
// (x_1, x_2, ...) order. That pins down the unique-minimizer semantics the
// certificate machinery relies on.

namespace scencert {

inline constexpr double kFeasTol = 1e-8;   // row satisfaction at Optimal
inline constexpr double kActTol = 1e-7;    // |residual| below this => active
inline constexpr double kLexTol = 1e-9;    // objective slack in lex pass

struct LpRow {
    std::vector<double> coeff;  // coeff . x <= rhs
    double rhs = 0.0;
};

struct LinearProgram {
    std::vector<double> cost;
    std::vector<LpRow> rows;
    // +-infinity entries mean unbounded; empty vectors mean all-unbounded.
    std::vector<double> var_lower;
    std::vector<double> var_upper;

    std::size_t num_vars() const { return cost.size(); }
    void check_dimensions() const;  // throws DomainError
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;  // +inf when Infeasible, -inf when Unbounded
    std::vector<std::size_t> active_rows;
};

class Simplex {
   public:
    // Full contract: on Optimal, x is the lexicographically smallest
    // optimizer and active_rows is computed at that point.
    LpSolution solve(const LinearProgram& lp);

    // Single simplex run, no lexicographic pass: some optimal vertex (still
    // deterministic). Cheaper; use when only the objective matters.
    LpSolution solve_basic(const LinearProgram& lp);

    // The unique point minimizing (x_1, then x_2, ...) over
    // {feasible, cost . x <= optimal_value + kLexTol}; n_x LP solves, each
    // freezing the previous coordinate at its minimum.
    std::vector<double> lex_refine(const LinearProgram& lp, double optimal_value);

   private:
    // Condensed dictionary state, reused across solves of one instance.
    std::vector<double> tab_;       // rows_ x (cols_ + 1), rhs in last slot
    std::vector<double> obj_;       // reduced costs + objective constant
    std::vector<std::size_t> basic_, nonbasic_;
    std::size_t rows_ = 0, cols_ = 0;

    double* row(std::size_t i) { return tab_.data() + i * (cols_ + 1); }
    void pivot(std::size_t r, std::size_t s);
    bool run_simplex();  // false => unbounded
};

// Convenience wrappers creating a fresh solver per call (thread-safe).
LpSolution lp_solve(const LinearProgram& lp);
LpSolution lp_solve_basic(const LinearProgram& lp);
std::vector<double> lp_lex_refine(const LinearProgram& lp, double optimal_value);

}  // namespace scencert

#endif
