#ifndef SCENCERT_TESTS_LP_ORACLE_HPP
#define SCENCERT_TESTS_LP_ORACLE_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "scencert/lp.hpp"

// Brute-force LP oracle: every vertex is the intersection of n active rows
//（finite variable bounds included as rows), so enumerate all n-subsets,
// solve the square system, keep feasible points, and take the best objective
// (lexicographic order breaks ties). Only valid for feasible bounded LPs.

namespace lp_oracle {

struct Result {
    bool feasible = false;
    double objective = std::numeric_limits<double>::infinity();
    std::vector<double> x;  // lexicographically smallest optimal vertex
};

// Gaussian elimination with partial pivoting; false when near-singular.
inline bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double>& out) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-10) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double v = b[r];
        for (std::size_t c = r + 1; c < n; ++c) v -= a[r][c] * out[c];
        out[r] = v / a[r][r];
    }
    return true;
}

inline Result solve(const scencert::LinearProgram& lp) {
    const std::size_t n = lp.num_vars();
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const auto& r : lp.rows) {
        rows.push_back(r.coeff);
        rhs.push_back(r.rhs);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!lp.var_upper.empty() && std::isfinite(lp.var_upper[j])) {
            std::vector<double> e(n, 0.0);
            e[j] = 1.0;
            rows.push_back(e);
            rhs.push_back(lp.var_upper[j]);
        }
        if (!lp.var_lower.empty() && std::isfinite(lp.var_lower[j])) {
            std::vector<double> e(n, 0.0);
            e[j] = -1.0;
            rows.push_back(e);
            rhs.push_back(-lp.var_lower[j]);
        }
    }

    Result best;
    const std::size_t total = rows.size();
    if (total < n) return best;

    std::vector<std::size_t> pick(n);
    for (std::size_t i = 0; i < n; ++i) pick[i] = i;
    std::vector<double> x;
    for (;;) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (std::size_t i : pick) {
            a.push_back(rows[i]);
            b.push_back(rhs[i]);
        }
        if (solve_square(std::move(a), std::move(b), x)) {
            bool feas = true;
            for (std::size_t i = 0; i < total && feas; ++i) {
                double lhs = 0.0;
                for (std::size_t j = 0; j < n; ++j) lhs += rows[i][j] * x[j];
                feas = lhs <= rhs[i] + 1e-9;
            }
            if (feas) {
                double obj = 0.0;
                for (std::size_t j = 0; j < n; ++j) obj += lp.cost[j] * x[j];
                bool better = !best.feasible || obj < best.objective - 1e-9;
                if (!better && best.feasible && obj < best.objective + 1e-9) {
                    for (std::size_t j = 0; j < n; ++j) {  // lexicographic tie-break
                        if (std::abs(x[j] - best.x[j]) <= 1e-9) continue;
                        better = x[j] < best.x[j];
                        break;
                    }
                }
                if (better) {
                    best.feasible = true;
                    best.objective = std::min(obj, best.objective);
                    best.x = x;
                }
            }
        }
        std::size_t pos = n;
        while (pos > 0 && pick[pos - 1] == total - n + pos - 1) --pos;
        if (pos == 0) break;
        ++pick[pos - 1];
        for (std::size_t i = pos; i < n; ++i) pick[i] = pick[i - 1] + 1;
    }
    return best;
}

}  // namespace lp_oracle

#endif
