#ifndef SCENCERT_SAMPLING_HPP
#define SCENCERT_SAMPLING_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "scencert/errors.hpp"

// Seeded i.i.d. generators for the uncertainty. Streams are split per trial
// with derive(), so parallel trials never share a generator. Only the
// standardized mt19937_64 core is used and the uniform/normal transforms are
// written out here, which keeps every draw bit-reproducible across platforms.

namespace scencert {

using Sample = std::vector<double>;

struct UniformBoxDist {
    std::vector<double> lower, upper;  // lower < upper componentwise
};

struct GaussianDiagDist {
    std::vector<double> mean, stddev;  // stddev > 0
};

struct EmpiricalDist {
    std::vector<Sample> table;  // drawn with replacement
};

struct DistributionSpec {
    std::variant<UniformBoxDist, GaussianDiagDist, EmpiricalDist> dist;

    std::size_t dimension() const;
    void validate() const;  // throws DomainError
};

// Deterministic: identical (spec, m, seed) yields identical output.
std::vector<Sample> draw(const DistributionSpec& spec, std::size_t m, std::uint64_t seed);

// Stream splitting: splitmix64 finalizer applied to
// seed + 0x9E3779B97F4A7C15 * (trial_index + 1). The finalizer is a bijection
// on 64-bit words and the golden-ratio multiples are distinct, so the map is
// injective in trial_index for any fixed seed.
std::uint64_t derive(std::uint64_t seed, std::uint64_t trial_index);

// Counter-based splitmix64 stream (the family recorded in report metadata).
class RandomStream {
   public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}
    double uniform01();  // [0, 1), 53-bit mantissa
    double gaussian();   // standard normal, Box-Muller
    std::uint64_t next_u64();

   private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline constexpr const char* kGeneratorFamily = "splitmix64";

}  // namespace scencert

#endif
