#include "scencert/sampling.hpp"

#include <cmath>
#include <string>

namespace scencert {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64_finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

std::uint64_t derive(std::uint64_t seed, std::uint64_t trial_index) {
    return splitmix64_finalize(seed + kGolden * (trial_index + 1));
}

std::uint64_t RandomStream::next_u64() {
    state_ += kGolden;
    return splitmix64_finalize(state_);
}

double RandomStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
}

std::size_t DistributionSpec::dimension() const {
    if (const auto* u = std::get_if<UniformBoxDist>(&dist)) return u->lower.size();
    if (const auto* g = std::get_if<GaussianDiagDist>(&dist)) return g->mean.size();
    return std::get<EmpiricalDist>(dist).table.empty()
               ? 0
               : std::get<EmpiricalDist>(dist).table.front().size();
}

void DistributionSpec::validate() const {
    if (const auto* u = std::get_if<UniformBoxDist>(&dist)) {
        if (u->lower.empty() || u->lower.size() != u->upper.size())
            throw DomainError("uniform_box: lower/upper must be nonempty and same length");
        for (std::size_t i = 0; i < u->lower.size(); ++i)
            if (!(u->lower[i] < u->upper[i]))
                throw DomainError("uniform_box: lower < upper required at index " +
                                  std::to_string(i));
        return;
    }
    if (const auto* g = std::get_if<GaussianDiagDist>(&dist)) {
        if (g->mean.empty() || g->mean.size() != g->stddev.size())
            throw DomainError("gaussian_diag: mean/stddev must be nonempty and same length");
        for (std::size_t i = 0; i < g->stddev.size(); ++i)
            if (!(g->stddev[i] > 0.0))
                throw DomainError("gaussian_diag: stddev > 0 required at index " +
                                  std::to_string(i));
        return;
    }
    const auto& e = std::get<EmpiricalDist>(dist);
    if (e.table.empty()) throw DomainError("empirical: table must be nonempty");
    for (const auto& row : e.table)
        if (row.size() != e.table.front().size())
            throw DomainError("empirical: ragged sample table");
}

std::vector<Sample> draw(const DistributionSpec& spec, std::size_t m, std::uint64_t seed) {
    spec.validate();
    const std::size_t dim = spec.dimension();
    RandomStream rng(seed);
    std::vector<Sample> out;
    out.reserve(m);

    if (const auto* u = std::get_if<UniformBoxDist>(&spec.dist)) {
        for (std::size_t i = 0; i < m; ++i) {
            Sample s(dim);
            for (std::size_t l = 0; l < dim; ++l)
                s[l] = u->lower[l] + rng.uniform01() * (u->upper[l] - u->lower[l]);
            out.push_back(std::move(s));
        }
        return out;
    }
    if (const auto* g = std::get_if<GaussianDiagDist>(&spec.dist)) {
        for (std::size_t i = 0; i < m; ++i) {
            Sample s(dim);
            for (std::size_t l = 0; l < dim; ++l)
                s[l] = g->mean[l] + g->stddev[l] * rng.gaussian();
            out.push_back(std::move(s));
        }
        return out;
    }
    const auto& table = std::get<EmpiricalDist>(spec.dist).table;
    for (std::size_t i = 0; i < m; ++i) {
        auto idx = static_cast<std::size_t>(rng.uniform01() *
                                            static_cast<double>(table.size()));
        if (idx >= table.size()) idx = table.size() - 1;
        out.push_back(table[idx]);
    }
    return out;
}

}  // namespace scencert
