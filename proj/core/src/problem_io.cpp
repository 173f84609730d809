#include "scencert/problem_io.hpp"

#include <filesystem>
#include <fstream>
#include <limits>

namespace scencert {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw SchemaError(path + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::vector<double> vector_at(const json& j, const std::string& path,
                              std::size_t expect = 0) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
    if (expect != 0 && out.size() != expect)
        fail(path, "expected length " + std::to_string(expect) + ", got " +
                       std::to_string(out.size()));
    return out;
}

// Bounds arrays accept null entries for +-infinity.
std::vector<double> bounds_at(const json& j, const std::string& path, std::size_t n,
                              double unbounded) {
    if (!j.is_array()) fail(path, "expected an array of numbers or nulls");
    if (j.size() != n)
        fail(path, "expected length " + std::to_string(n) + ", got " +
                       std::to_string(j.size()));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string at = path + "[" + std::to_string(i) + "]";
        if (j[i].is_null())
            out[i] = unbounded;
        else
            out[i] = number_at(j[i], at);
    }
    return out;
}

std::vector<std::vector<double>> matrix_at(const json& j, const std::string& path,
                                           std::size_t rows, std::size_t cols) {
    if (!j.is_array()) fail(path, "expected a matrix (array of arrays)");
    if (j.size() != rows)
        fail(path, "expected " + std::to_string(rows) + " rows, got " +
                       std::to_string(j.size()));
    std::vector<std::vector<double>> out;
    out.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i)
        out.push_back(vector_at(j[i], path + "[" + std::to_string(i) + "]", cols));
    return out;
}

std::size_t positive_integer_at(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 1)
        fail(path, "expected a positive integer");
    return static_cast<std::size_t>(j.get<std::int64_t>());
}

DistributionSpec parse_distribution(const json& j, const std::string& path) {
    const json& type = member(j, "type", path);
    if (!type.is_string()) fail(path + ".type", "expected a string");
    const std::string tag = type.get<std::string>();
    DistributionSpec spec;
    if (tag == "uniform_box") {
        UniformBoxDist u;
        u.lower = vector_at(member(j, "lower", path), path + ".lower");
        u.upper = vector_at(member(j, "upper", path), path + ".upper");
        spec.dist = std::move(u);
    } else if (tag == "gaussian_diag") {
        GaussianDiagDist g;
        g.mean = vector_at(member(j, "mean", path), path + ".mean");
        g.stddev = vector_at(member(j, "stddev", path), path + ".stddev");
        spec.dist = std::move(g);
    } else if (tag == "empirical") {
        const json& table = member(j, "table", path);
        if (!table.is_array() || table.empty())
            fail(path + ".table", "expected a nonempty array of samples");
        EmpiricalDist e;
        for (std::size_t i = 0; i < table.size(); ++i)
            e.table.push_back(
                vector_at(table[i], path + ".table[" + std::to_string(i) + "]"));
        spec.dist = std::move(e);
    } else {
        fail(path + ".type", "unknown distribution type '" + tag + "'");
    }
    try {
        spec.validate();
    } catch (const DomainError& e) {
        fail(path, e.what());
    }
    return spec;
}

json distribution_to_json(const DistributionSpec& spec) {
    json j;
    if (const auto* u = std::get_if<UniformBoxDist>(&spec.dist)) {
        j["type"] = "uniform_box";
        j["lower"] = u->lower;
        j["upper"] = u->upper;
    } else if (const auto* g = std::get_if<GaussianDiagDist>(&spec.dist)) {
        j["type"] = "gaussian_diag";
        j["mean"] = g->mean;
        j["stddev"] = g->stddev;
    } else {
        j["type"] = "empirical";
        j["table"] = std::get<EmpiricalDist>(spec.dist).table;
    }
    return j;
}

json bounds_to_json(const std::vector<double>& bounds, std::size_t n) {
    json arr = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = bounds.empty() ? kInf : bounds[i];
        if (std::isfinite(v))
            arr.push_back(v);
        else
            arr.push_back(nullptr);
    }
    return arr;
}

}  // namespace

ProblemFile parse_problem_file(const json& j) {
    ProblemFile file;
    const json& version = member(j, "schema_version", "");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
        fail("schema_version", "unsupported version (expected " +
                                   std::to_string(kSchemaVersion) + ")");

    const json& pj = member(j, "problem", "");
    ScenarioProblem& p = file.problem;
    p.n_x = positive_integer_at(member(pj, "n_x", "problem"), "problem.n_x");
    p.n_delta = positive_integer_at(member(pj, "n_delta", "problem"), "problem.n_delta");
    p.cost = vector_at(member(pj, "cost", "problem"), "problem.cost", p.n_x);
    if (pj.contains("var_lower"))
        p.var_lower = bounds_at(pj["var_lower"], "problem.var_lower", p.n_x, -kInf);
    if (pj.contains("var_upper"))
        p.var_upper = bounds_at(pj["var_upper"], "problem.var_upper", p.n_x, kInf);
    const json& cons = member(pj, "constraints", "problem");
    if (!cons.is_array() || cons.empty())
        fail("problem.constraints", "expected a nonempty array");
    for (std::size_t i = 0; i < cons.size(); ++i) {
        const std::string at = "problem.constraints[" + std::to_string(i) + "]";
        UncertainAffineConstraint c;
        c.f0 = vector_at(member(cons[i], "f0", at), at + ".f0", p.n_x);
        c.F = matrix_at(member(cons[i], "F", at), at + ".F", p.n_x, p.n_delta);
        c.h0 = number_at(member(cons[i], "h0", at), at + ".h0");
        c.h = vector_at(member(cons[i], "h", at), at + ".h", p.n_delta);
        p.constraints.push_back(std::move(c));
    }
    try {
        p.validate();
    } catch (const DomainError& e) {
        fail("problem", e.what());
    }

    if (j.contains("second_stage") && !j["second_stage"].is_null()) {
        const json& sj = j["second_stage"];
        SecondStageSpec s;
        s.n_y = positive_integer_at(member(sj, "n_y", "second_stage"),
                                    "second_stage.n_y");
        s.cost_y = vector_at(member(sj, "cost_y", "second_stage"),
                             "second_stage.cost_y", s.n_y);
        if (sj.contains("y_lower"))
            s.y_lower = bounds_at(sj["y_lower"], "second_stage.y_lower", s.n_y, -kInf);
        if (sj.contains("y_upper"))
            s.y_upper = bounds_at(sj["y_upper"], "second_stage.y_upper", s.n_y, kInf);
        const json& scons = member(sj, "constraints", "second_stage");
        if (!scons.is_array() || scons.empty())
            fail("second_stage.constraints", "expected a nonempty array");
        for (std::size_t i = 0; i < scons.size(); ++i) {
            const std::string at = "second_stage.constraints[" + std::to_string(i) + "]";
            CoupledConstraint c;
            c.a0 = vector_at(member(scons[i], "a0", at), at + ".a0", s.n_y);
            c.A = matrix_at(member(scons[i], "A", at), at + ".A", s.n_y, p.n_delta);
            c.Q = matrix_at(member(scons[i], "Q", at), at + ".Q", p.n_x, p.n_delta);
            c.q = vector_at(member(scons[i], "q", at), at + ".q", p.n_x);
            c.s = vector_at(member(scons[i], "s", at), at + ".s", p.n_delta);
            c.t = number_at(member(scons[i], "t", at), at + ".t");
            s.constraints.push_back(std::move(c));
        }
        try {
            s.validate(p.n_x, p.n_delta);
        } catch (const DomainError& e) {
            fail("second_stage", e.what());
        }
        file.second_stage = std::move(s);
    }

    file.distribution = parse_distribution(member(j, "distribution", ""), "distribution");
    if (file.distribution.dimension() != p.n_delta)
        fail("distribution", "dimension " + std::to_string(file.distribution.dimension()) +
                                 " does not match problem.n_delta = " +
                                 std::to_string(p.n_delta));

    if (j.contains("canonical_tag") && !j["canonical_tag"].is_null()) {
        if (!j["canonical_tag"].is_string())
            fail("canonical_tag", "expected a string");
        try {
            file.canonical_tag = parse_canonical_tag(j["canonical_tag"].get<std::string>());
        } catch (const DomainError& e) {
            fail("canonical_tag", e.what());
        }
    }
    return file;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path + ": cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return parse_problem_file(j);
}

json to_json(const ProblemFile& file) {
    json j;
    j["schema_version"] = file.schema_version;
    json pj;
    const ScenarioProblem& p = file.problem;
    pj["n_x"] = p.n_x;
    pj["n_delta"] = p.n_delta;
    pj["cost"] = p.cost;
    pj["var_lower"] = bounds_to_json(p.var_lower, p.n_x);
    pj["var_upper"] = bounds_to_json(p.var_upper, p.n_x);
    pj["constraints"] = json::array();
    for (const auto& c : p.constraints)
        pj["constraints"].push_back(
            {{"f0", c.f0}, {"F", c.F}, {"h0", c.h0}, {"h", c.h}});
    j["problem"] = std::move(pj);
    if (file.second_stage) {
        const SecondStageSpec& s = *file.second_stage;
        json sj;
        sj["n_y"] = s.n_y;
        sj["cost_y"] = s.cost_y;
        sj["y_lower"] = bounds_to_json(s.y_lower, s.n_y);
        sj["y_upper"] = bounds_to_json(s.y_upper, s.n_y);
        sj["constraints"] = json::array();
        for (const auto& c : s.constraints)
            sj["constraints"].push_back({{"a0", c.a0},
                                         {"A", c.A},
                                         {"Q", c.Q},
                                         {"q", c.q},
                                         {"s", c.s},
                                         {"t", c.t}});
        j["second_stage"] = std::move(sj);
    }
    j["distribution"] = distribution_to_json(file.distribution);
    if (file.canonical_tag) j["canonical_tag"] = to_string(*file.canonical_tag);
    return j;
}

ExperimentSweep parse_experiment_sweep(const json& j, const std::string& base_dir) {
    ExperimentSweep sweep;
    if (j.contains("problem_file")) {
        if (!j["problem_file"].is_string())
            fail("problem_file", "expected a path string");
        std::filesystem::path p = j["problem_file"].get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        sweep.problem = load_problem_file(p.string());
    } else if (j.contains("problem_spec")) {
        sweep.problem = parse_problem_file(j["problem_spec"]);
    } else {
        fail("problem_file", "config needs either problem_file or problem_spec");
    }

    const json& ms = member(j, "m_values", "");
    if (!ms.is_array() || ms.empty()) fail("m_values", "expected a nonempty array");
    for (std::size_t i = 0; i < ms.size(); ++i)
        sweep.m_values.push_back(
            positive_integer_at(ms[i], "m_values[" + std::to_string(i) + "]"));

    const json& eps = member(j, "epsilon_values", "");
    if (!eps.is_array() || eps.empty())
        fail("epsilon_values", "expected a nonempty array");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double e = number_at(eps[i], "epsilon_values[" + std::to_string(i) + "]");
        if (!(e > 0.0 && e < 1.0))
            fail("epsilon_values[" + std::to_string(i) + "]", "must lie in (0,1)");
        sweep.epsilon_values.push_back(e);
    }

    const json& methods = member(j, "methods", "");
    if (!methods.is_array() || methods.empty())
        fail("methods", "expected a nonempty array");
    for (std::size_t i = 0; i < methods.size(); ++i) {
        const std::string at = "methods[" + std::to_string(i) + "]";
        if (!methods[i].is_string()) fail(at, "expected a string");
        const std::string name = methods[i].get<std::string>();
        try {
            (void)MethodSpec::parse(name);
        } catch (const DomainError& e) {
            fail(at, e.what());
        }
        sweep.methods.push_back(name);
    }

    sweep.trials = positive_integer_at(member(j, "trials", ""), "trials");
    const json& seed = member(j, "seed", "");
    if (!seed.is_number_integer()) fail("seed", "expected an integer");
    sweep.seed = seed.get<std::uint64_t>();
    return sweep;
}

ExperimentSweep load_experiment_sweep(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path + ": cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return parse_experiment_sweep(j, std::filesystem::path(path).parent_path().string());
}

json to_json(const Certificate& cert) {
    return {{"m", cert.m},
            {"d", cert.d},
            {"r", cert.r},
            {"kind", to_string(cert.kind)},
            {"epsilon", cert.epsilon},
            {"beta", cert.beta},
            {"equality_claimed", cert.equality_claimed},
            {"notes", cert.notes}};
}

json to_json(const ConsistencyRecord& record) {
    return {{"sample_count", record.sample_count},
            {"compression_indices", record.compression_indices},
            {"raw_compression_indices", record.raw_compression_indices},
            {"support_indices", record.support_indices},
            {"d_apriori", record.d_apriori},
            {"discarded", record.discarded},
            {"consistent", record.consistent}};
}

json to_json(const LpSolution& solution) {
    const char* status = solution.status == LpStatus::Optimal     ? "optimal"
                         : solution.status == LpStatus::Infeasible ? "infeasible"
                                                                   : "unbounded";
    return {{"status", status},
            {"x", solution.x},
            {"objective", solution.objective},
            {"active_rows", solution.active_rows}};
}

json to_json(const Box& box) {
    return {{"lower", box.lower}, {"upper", box.upper}};
}

json to_json(const ExperimentReport& report) {
    json j = {{"trials", report.trials},
              {"m", report.m},
              {"epsilon", report.epsilon},
              {"method", report.method},
              {"kind", report.kind},
              {"d", report.d},
              {"empirical_freq", report.empirical_freq},
              {"bound_value", report.bound_value},
              {"verdict", to_string(report.verdict)},
              {"caveats", report.caveats},
              {"violation_trials", report.violation_trials},
              {"degenerate_trials", report.degenerate_trials},
              {"straddle_trials", report.straddle_trials},
              {"generator", kGeneratorFamily}};
    if (report.exact_law_value)
        j["exact_law_value"] = *report.exact_law_value;
    else
        j["exact_law_value"] = nullptr;
    return j;
}

json to_json(const KsReport& report) {
    return {{"trials", report.trials},
            {"d", report.d},
            {"statistic", report.statistic},
            {"critical_1pct", report.critical_1pct},
            {"verdict", to_string(report.verdict)}};
}

json to_json(const PartitionReport& report) {
    return {{"trials", report.trials},
            {"violations", report.violations},
            {"verdict", to_string(report.verdict)}};
}

}  // namespace scencert
