#include "scencert/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scencert {

namespace {

constexpr double kRedTol = 1e-9;    // reduced-cost optimality threshold
constexpr double kPivTol = 1e-9;    // smallest acceptable pivot magnitude
constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(double v) { return std::isfinite(v); }

// min chat . z + c0  s.t.  Ahat z <= bhat, z >= 0, plus recovery map back to x.
struct Computational {
    std::size_t n = 0;
    std::vector<double> c;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    double c0 = 0.0;

    struct VarMap {
        std::size_t zp = 0;
        std::size_t zq = 0;   // valid only when split
        bool split = false;
        double shift = 0.0;
        double sign = 1.0;    // x = shift + sign * z_p (- z_q when split)
    };
    std::vector<VarMap> vmap;

    std::vector<double> recover(const std::vector<double>& z) const {
        std::vector<double> x(vmap.size());
        for (std::size_t j = 0; j < vmap.size(); ++j) {
            const auto& vm = vmap[j];
            double v = vm.shift + vm.sign * z[vm.zp];
            if (vm.split) v -= z[vm.zq];
            x[j] = v;
        }
        return x;
    }
};

Computational translate(const LinearProgram& lp) {
    const std::size_t n_x = lp.num_vars();
    Computational comp;
    comp.vmap.resize(n_x);

    std::size_t cols = 0;
    for (std::size_t j = 0; j < n_x; ++j) {
        const double l = lp.var_lower.empty() ? -kInf : lp.var_lower[j];
        const double u = lp.var_upper.empty() ? kInf : lp.var_upper[j];
        auto& vm = comp.vmap[j];
        if (finite(l)) {
            vm = {cols++, 0, false, l, 1.0};
        } else if (finite(u)) {
            vm = {cols++, 0, false, u, -1.0};
        } else {
            vm = {cols, cols + 1, true, 0.0, 1.0};
            cols += 2;
        }
    }
    comp.n = cols;
    comp.c.assign(cols, 0.0);
    for (std::size_t j = 0; j < n_x; ++j) {
        const auto& vm = comp.vmap[j];
        comp.c0 += lp.cost[j] * vm.shift;
        comp.c[vm.zp] += lp.cost[j] * vm.sign;
        if (vm.split) comp.c[vm.zq] -= lp.cost[j];
    }

    auto add_row = [&](const std::vector<double>& coeff, double rhs) {
        std::vector<double> a(cols, 0.0);
        for (std::size_t j = 0; j < n_x; ++j) {
            if (coeff[j] == 0.0) continue;
            const auto& vm = comp.vmap[j];
            rhs -= coeff[j] * vm.shift;
            a[vm.zp] += coeff[j] * vm.sign;
            if (vm.split) a[vm.zq] -= coeff[j];
        }
        comp.A.push_back(std::move(a));
        comp.b.push_back(rhs);
    };

    for (const auto& r : lp.rows) add_row(r.coeff, r.rhs);
    // Two-sided bounds become explicit interval rows on the shifted variable.
    for (std::size_t j = 0; j < n_x; ++j) {
        const double l = lp.var_lower.empty() ? -kInf : lp.var_lower[j];
        const double u = lp.var_upper.empty() ? kInf : lp.var_upper[j];
        if (finite(l) && finite(u)) {
            std::vector<double> a(cols, 0.0);
            a[comp.vmap[j].zp] = 1.0;
            comp.A.push_back(std::move(a));
            comp.b.push_back(u - l);
        }
    }
    return comp;
}

}  // namespace

void LinearProgram::check_dimensions() const {
    const std::size_t n = num_vars();
    if (n == 0) throw DomainError("LinearProgram needs at least one variable");
    for (double c : cost)
        if (!finite(c)) throw DomainError("LinearProgram cost must be finite");
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].coeff.size() != n)
            throw DomainError("row " + std::to_string(i) + " has wrong arity");
    if (!var_lower.empty() && var_lower.size() != n)
        throw DomainError("var_lower has wrong arity");
    if (!var_upper.empty() && var_upper.size() != n)
        throw DomainError("var_upper has wrong arity");
    if (!var_lower.empty() && !var_upper.empty())
        for (std::size_t j = 0; j < n; ++j)
            if (var_lower[j] > var_upper[j])
                throw DomainError("var bounds cross at index " + std::to_string(j));
}

void Simplex::pivot(std::size_t r, std::size_t s) {
    double* pr = row(r);
    const double piv = pr[s];
    const double inv = 1.0 / piv;
    for (std::size_t k = 0; k <= cols_; ++k) pr[k] *= inv;
    pr[s] = inv;
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r) continue;
        double* pi = row(i);
        const double f = pi[s];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k <= cols_; ++k) pi[k] -= f * pr[k];
        pi[s] = -f * inv;
    }
    const double f = obj_[s];
    if (f != 0.0) {
        for (std::size_t k = 0; k < cols_; ++k) obj_[k] -= f * pr[k];
        obj_[s] = -f * inv;
        obj_[cols_] += f * pr[cols_];  // constant moves with +, rows with -
    }
    std::swap(basic_[r], nonbasic_[s]);
}

bool Simplex::run_simplex() {
    const std::size_t max_iter = 10'000 + 100 * (rows_ + cols_);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        // Bland: entering = eligible nonbasic with the smallest variable id.
        std::size_t s = cols_;
        for (std::size_t k = 0; k < cols_; ++k)
            if (obj_[k] < -kRedTol && (s == cols_ || nonbasic_[k] < nonbasic_[s]))
                s = k;
        if (s == cols_) return true;

        std::size_t r = rows_;
        double best = kInf;
        for (std::size_t i = 0; i < rows_; ++i) {
            const double a = row(i)[s];
            if (a <= kPivTol) continue;
            const double ratio = row(i)[cols_] / a;
            if (ratio < best || (ratio == best && basic_[i] < basic_[r])) {
                best = ratio;
                r = i;
            }
        }
        if (r == rows_) return false;  // entering column unbounded
        pivot(r, s);
    }
    throw SolverFailure("simplex iteration limit reached");
}

LpSolution Simplex::solve_basic(const LinearProgram& lp) {
    lp.check_dimensions();
    Computational comp = translate(lp);

    rows_ = comp.A.size();
    const std::size_t n = comp.n;
    const std::size_t aux_id = n + rows_;
    bool need_phase1 = false;
    for (double bi : comp.b)
        if (bi < 0.0) need_phase1 = true;

    cols_ = n + (need_phase1 ? 1 : 0);
    tab_.assign(rows_ * (cols_ + 1), 0.0);
    basic_.resize(rows_);
    nonbasic_.resize(cols_);
    for (std::size_t k = 0; k < n; ++k) nonbasic_[k] = k;
    if (need_phase1) nonbasic_[n] = aux_id;
    for (std::size_t i = 0; i < rows_; ++i) {
        basic_[i] = n + i;
        double* pi = row(i);
        for (std::size_t k = 0; k < n; ++k) pi[k] = comp.A[i][k];
        if (need_phase1) pi[n] = -1.0;
        pi[cols_] = comp.b[i];
    }

    if (need_phase1) {
        obj_.assign(cols_ + 1, 0.0);
        obj_[n] = 1.0;  // minimize the auxiliary variable
        std::size_t r0 = 0;
        for (std::size_t i = 1; i < rows_; ++i)
            if (row(i)[cols_] < row(r0)[cols_]) r0 = i;
        pivot(r0, n);
        if (!run_simplex())
            throw SolverFailure("phase-1 auxiliary problem unbounded");
        if (obj_[cols_] > 1e-9) {
            LpSolution sol;
            sol.status = LpStatus::Infeasible;
            sol.objective = kInf;
            return sol;
        }
        // Drive the auxiliary variable out of the basis if it is stuck at 0.
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basic_[i] != aux_id) continue;
            std::size_t s = cols_;
            for (std::size_t k = 0; k < cols_; ++k)
                if (std::abs(row(i)[k]) > kPivTol) { s = k; break; }
            if (s < cols_) {
                pivot(i, s);
            } else {
                // Redundant 0 = 0 row: drop it.
                const std::size_t last = rows_ - 1;
                if (i != last) {
                    std::copy(row(last), row(last) + cols_ + 1, row(i));
                    basic_[i] = basic_[last];
                }
                --rows_;
                tab_.resize(rows_ * (cols_ + 1));
            }
            break;
        }
        // Delete the auxiliary column (swap with the last logical column).
        std::size_t s_aux = cols_;
        for (std::size_t k = 0; k < cols_; ++k)
            if (nonbasic_[k] == aux_id) { s_aux = k; break; }
        if (s_aux == cols_)
            throw SolverFailure("auxiliary variable still basic after phase 1");
        const std::size_t lastc = cols_ - 1;
        std::vector<double> packed(rows_ * cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            double* pi = row(i);
            if (s_aux != lastc) pi[s_aux] = pi[lastc];
            for (std::size_t k = 0; k < lastc; ++k) packed[i * cols_ + k] = pi[k];
            packed[i * cols_ + lastc] = pi[cols_];  // rhs shifts left
        }
        nonbasic_[s_aux] = nonbasic_[lastc];
        nonbasic_.pop_back();
        cols_ = lastc;
        tab_ = std::move(packed);
    }

    // Phase 2 objective expressed over the current nonbasic set.
    obj_.assign(cols_ + 1, 0.0);
    obj_[cols_] = comp.c0;
    std::vector<std::ptrdiff_t> basic_row(n, -1), nonbasic_col(n, -1);
    for (std::size_t i = 0; i < rows_; ++i)
        if (basic_[i] < n) basic_row[basic_[i]] = static_cast<std::ptrdiff_t>(i);
    for (std::size_t k = 0; k < cols_; ++k)
        if (nonbasic_[k] < n) nonbasic_col[nonbasic_[k]] = static_cast<std::ptrdiff_t>(k);
    for (std::size_t j = 0; j < n; ++j) {
        const double cj = comp.c[j];
        if (cj == 0.0) continue;
        if (nonbasic_col[j] >= 0) {
            obj_[static_cast<std::size_t>(nonbasic_col[j])] += cj;
        } else {
            const double* pr = row(static_cast<std::size_t>(basic_row[j]));
            for (std::size_t k = 0; k < cols_; ++k) obj_[k] -= cj * pr[k];
            obj_[cols_] += cj * pr[cols_];
        }
    }

    const bool bounded = run_simplex();

    std::vector<double> z(n, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        if (basic_[i] < n) z[basic_[i]] = std::max(0.0, row(i)[cols_]);

    LpSolution sol;
    sol.x = comp.recover(z);
    if (!bounded) {
        sol.status = LpStatus::Unbounded;
        sol.objective = -kInf;
        return sol;
    }

    double obj = 0.0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) obj += lp.cost[j] * sol.x[j];
    sol.status = LpStatus::Optimal;
    sol.objective = obj;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < lp.num_vars(); ++j)
            lhs += lp.rows[i].coeff[j] * sol.x[j];
        const double resid = lp.rows[i].rhs - lhs;
        if (resid < -kFeasTol)
            throw SolverFailure("optimal point violates row " + std::to_string(i) +
                                " by " + std::to_string(-resid));
        if (std::abs(resid) <= kActTol) sol.active_rows.push_back(i);
    }
    return sol;
}

std::vector<double> Simplex::lex_refine(const LinearProgram& lp, double optimal_value) {
    const std::size_t n = lp.num_vars();
    LinearProgram work = lp;
    work.rows.push_back({lp.cost, optimal_value + kLexTol});

    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        work.cost.assign(n, 0.0);
        work.cost[j] = 1.0;
        const LpSolution sol = solve_basic(work);
        if (sol.status == LpStatus::Unbounded)
            throw SolverFailure("optimal face unbounded below in coordinate " +
                                std::to_string(j));
        if (sol.status != LpStatus::Optimal)
            throw SolverFailure("lexicographic refinement sub-LP infeasible");
        out[j] = sol.objective;
        LpRow freeze;
        freeze.coeff.assign(n, 0.0);
        freeze.coeff[j] = 1.0;
        freeze.rhs = out[j];
        work.rows.push_back(std::move(freeze));
    }
    return out;
}

LpSolution Simplex::solve(const LinearProgram& lp) {
    LpSolution sol = solve_basic(lp);
    if (sol.status != LpStatus::Optimal) return sol;

    sol.x = lex_refine(lp, sol.objective);
    double obj = 0.0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) obj += lp.cost[j] * sol.x[j];
    sol.objective = obj;
    sol.active_rows.clear();
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < lp.num_vars(); ++j)
            lhs += lp.rows[i].coeff[j] * sol.x[j];
        if (std::abs(lp.rows[i].rhs - lhs) <= kActTol) sol.active_rows.push_back(i);
    }
    return sol;
}

LpSolution lp_solve(const LinearProgram& lp) { return Simplex{}.solve(lp); }
LpSolution lp_solve_basic(const LinearProgram& lp) { return Simplex{}.solve_basic(lp); }
std::vector<double> lp_lex_refine(const LinearProgram& lp, double optimal_value) {
    return Simplex{}.lex_refine(lp, optimal_value);
}

}  // namespace scencert
