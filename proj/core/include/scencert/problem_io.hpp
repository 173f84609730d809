#ifndef SCENCERT_PROBLEM_IO_HPP
#define SCENCERT_PROBLEM_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scencert/canonical.hpp"
#include "scencert/cascade.hpp"
#include "scencert/robust_box.hpp"
#include "scencert/scenario.hpp"
#include "scencert/validate.hpp"

// JSON problem/config/report formats (schemas documented in docs/). Parsing
// is schema-checked before any solve; errors carry the offending field path.

namespace scencert {

inline constexpr int kSchemaVersion = 1;

struct ProblemFile {
    int schema_version = kSchemaVersion;
    ScenarioProblem problem;
    std::optional<SecondStageSpec> second_stage;
    DistributionSpec distribution;
    std::optional<CanonicalTag> canonical_tag;
};

ProblemFile parse_problem_file(const nlohmann::json& j);
ProblemFile load_problem_file(const std::string& path);
nlohmann::json to_json(const ProblemFile& file);

struct ExperimentSweep {
    ProblemFile problem;
    std::vector<std::size_t> m_values;
    std::vector<double> epsilon_values;
    std::vector<std::string> methods;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

// Config may reference "problem_file" (resolved relative to the config's
// directory) or carry the problem inline under "problem_spec".
ExperimentSweep load_experiment_sweep(const std::string& path);
ExperimentSweep parse_experiment_sweep(const nlohmann::json& j,
                                       const std::string& base_dir);

nlohmann::json to_json(const Certificate& cert);
nlohmann::json to_json(const ConsistencyRecord& record);
nlohmann::json to_json(const LpSolution& solution);
nlohmann::json to_json(const Box& box);
nlohmann::json to_json(const ExperimentReport& report);
nlohmann::json to_json(const KsReport& report);
nlohmann::json to_json(const PartitionReport& report);

}  // namespace scencert

#endif
