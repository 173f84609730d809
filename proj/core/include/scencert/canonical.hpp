#ifndef SCENCERT_CANONICAL_HPP
#define SCENCERT_CANONICAL_HPP

#include <string>
#include <vector>

#include "scencert/cascade.hpp"
#include "scencert/sampling.hpp"
#include "scencert/scenario.hpp"

// Registered canonical problems with analytically known violation laws; the
// validation harness and the acceptance suite are built on these.
//
//   max1d      min x s.t. x >= delta_i           (n_x = 1, d = 1, fully supported)
//   interval1d min radius s.t. |delta_i - center| <= radius
//              (n_x = 2, box-design canonical with d = 2 n_delta = 2; the
//               violation set equals the box complement)
//   cascade1d  stage one: min x s.t. x >= delta_i; stage two, same samples:
//              max y s.t. y <= x + delta_i       (n_x = n_y = 1, d = 2; the
//               joint violation set is the complement of the sample range)

namespace scencert {

enum class CanonicalTag { Max1D, Interval1D, Cascade1D };

std::string to_string(CanonicalTag tag);
CanonicalTag parse_canonical_tag(const std::string& text);

ScenarioProblem canonical_problem(CanonicalTag tag);
// Stage two of cascade1d; throws DomainError for the other tags.
SecondStageSpec canonical_second_stage(CanonicalTag tag);
// Uniform[0,1] uncertainty, the distribution the canonical laws are stated for.
DistributionSpec canonical_distribution(CanonicalTag tag);

// Exact violation probability of a solution of a registered canonical form
// under the named 1-D distribution (uniform_box or gaussian_diag). For
// cascade1d, `solution` is the concatenation (x, y). Unregistered
// combinations raise DomainError.
double violation_probability_exact_1d(CanonicalTag tag,
                                      const std::vector<double>& solution,
                                      const DistributionSpec& dist);

}  // namespace scencert

#endif
