#include "scencert/canonical.hpp"

#include <algorithm>
#include <cmath>

namespace scencert {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// P(delta > t) and P(delta < t) for the 1-D continuous distributions.
double prob_above(const DistributionSpec& dist, double t) {
    if (const auto* u = std::get_if<UniformBoxDist>(&dist.dist))
        return clamp01((u->upper[0] - t) / (u->upper[0] - u->lower[0]));
    if (const auto* g = std::get_if<GaussianDiagDist>(&dist.dist))
        return 0.5 * std::erfc((t - g->mean[0]) / (g->stddev[0] * std::sqrt(2.0)));
    throw DomainError("violation_probability_exact_1d: distribution not registered "
                      "for analytic evaluation");
}

double prob_below(const DistributionSpec& dist, double t) {
    if (const auto* u = std::get_if<UniformBoxDist>(&dist.dist))
        return clamp01((t - u->lower[0]) / (u->upper[0] - u->lower[0]));
    if (const auto* g = std::get_if<GaussianDiagDist>(&dist.dist))
        return 0.5 * std::erfc((g->mean[0] - t) / (g->stddev[0] * std::sqrt(2.0)));
    throw DomainError("violation_probability_exact_1d: distribution not registered "
                      "for analytic evaluation");
}

}  // namespace

std::string to_string(CanonicalTag tag) {
    switch (tag) {
        case CanonicalTag::Max1D: return "max1d";
        case CanonicalTag::Interval1D: return "interval1d";
        case CanonicalTag::Cascade1D: return "cascade1d";
    }
    return "?";
}

CanonicalTag parse_canonical_tag(const std::string& text) {
    if (text == "max1d") return CanonicalTag::Max1D;
    if (text == "interval1d") return CanonicalTag::Interval1D;
    if (text == "cascade1d") return CanonicalTag::Cascade1D;
    throw DomainError("unregistered canonical tag '" + text + "'");
}

ScenarioProblem canonical_problem(CanonicalTag tag) {
    ScenarioProblem p;
    switch (tag) {
        case CanonicalTag::Max1D:
        case CanonicalTag::Cascade1D: {
            // min x s.t. delta - x <= 0
            p.n_x = 1;
            p.n_delta = 1;
            p.cost = {1.0};
            UncertainAffineConstraint c;
            c.f0 = {-1.0};
            c.F = {{0.0}};
            c.h0 = 0.0;
            c.h = {1.0};
            p.constraints.push_back(std::move(c));
            return p;
        }
        case CanonicalTag::Interval1D: {
            // min radius s.t. |delta - center| <= radius, as two affine rows
            p.n_x = 2;
            p.n_delta = 1;
            p.cost = {0.0, 1.0};
            UncertainAffineConstraint up;    // delta - center - radius <= 0
            up.f0 = {-1.0, -1.0};
            up.F = {{0.0}, {0.0}};
            up.h0 = 0.0;
            up.h = {1.0};
            UncertainAffineConstraint down;  // center - delta - radius <= 0
            down.f0 = {1.0, -1.0};
            down.F = {{0.0}, {0.0}};
            down.h0 = 0.0;
            down.h = {-1.0};
            p.constraints.push_back(std::move(up));
            p.constraints.push_back(std::move(down));
            return p;
        }
    }
    throw DomainError("unregistered canonical tag");
}

SecondStageSpec canonical_second_stage(CanonicalTag tag) {
    if (tag != CanonicalTag::Cascade1D)
        throw DomainError("canonical tag has no second stage");
    // max y s.t. y - x - delta <= 0 (y_m = x_m + min delta)
    SecondStageSpec s;
    s.n_y = 1;
    s.cost_y = {-1.0};
    CoupledConstraint c;
    c.a0 = {1.0};
    c.A = {{0.0}};
    c.Q = {{0.0}};
    c.q = {-1.0};
    c.s = {-1.0};
    c.t = 0.0;
    s.constraints.push_back(std::move(c));
    return s;
}

DistributionSpec canonical_distribution(CanonicalTag) {
    return {UniformBoxDist{{0.0}, {1.0}}};
}

double violation_probability_exact_1d(CanonicalTag tag,
                                      const std::vector<double>& solution,
                                      const DistributionSpec& dist) {
    dist.validate();
    if (dist.dimension() != 1)
        throw DomainError("canonical forms are registered for 1-D uncertainty only");
    switch (tag) {
        case CanonicalTag::Max1D:
            if (solution.size() != 1) throw DomainError("max1d solution is (x)");
            return prob_above(dist, solution[0]);
        case CanonicalTag::Interval1D: {
            if (solution.size() != 2)
                throw DomainError("interval1d solution is (center, radius)");
            const double lo = solution[0] - solution[1];
            const double hi = solution[0] + solution[1];
            return clamp01(prob_below(dist, lo) + prob_above(dist, hi));
        }
        case CanonicalTag::Cascade1D: {
            if (solution.size() != 2)
                throw DomainError("cascade1d solution is the pair (x, y)");
            const double x = solution[0], y = solution[1];
            return clamp01(prob_below(dist, y - x) + prob_above(dist, x));
        }
    }
    throw DomainError("unregistered canonical tag");
}

}  // namespace scencert
