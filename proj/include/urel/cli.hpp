#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "urel/core.hpp"
#include "urel/measurement.hpp"

namespace urel::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// Bad scenario file, bad flag or unresolved reference. Maps to exit status 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode { exit_ok = 0, exit_verification_failure = 1, exit_input_error = 2 };

struct MeasurementSpec {
    OutcomeSpace outcomes;
    std::vector<CMatrix> effects;

    friend bool operator==(const MeasurementSpec&, const MeasurementSpec&) = default;
};

/// Effects listed first-major: effect (i, j) sits at position i * second.size() + j.
struct JointSpec {
    OutcomeSpace first;
    OutcomeSpace second;
    std::vector<CMatrix> effects;

    friend bool operator==(const JointSpec&, const JointSpec&) = default;
};

/// kernel(j, i) = K(output j | input i).
struct ChannelSpec {
    OutcomeSpace inputs;
    OutcomeSpace outputs;
    RMatrix kernel;

    friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

struct Task {
    std::string kind;
    std::string name;
    /// Single references, e.g. "state" -> "rho".
    std::map<std::string, std::string> refs;
    /// Reference lists, e.g. "joints" -> ["j1", "j2"].
    std::map<std::string, std::vector<std::string>> ref_lists;

    friend bool operator==(const Task&, const Task&) = default;
};

/// In-memory scenario. Matrices are kept as written; type invariants are checked at parse time.
struct Scenario {
    int dim = 0;
    /// Only the fields present in the file; flags and defaults fill in the rest.
    std::map<std::string, double> tolerance_overrides;
    std::map<std::string, CMatrix> states;
    std::map<std::string, CMatrix> observables;
    std::map<std::string, MeasurementSpec> measurements;
    std::map<std::string, JointSpec> joint_measurements;
    std::map<std::string, ChannelSpec> channels;
    std::map<std::string, RVector> distributions;
    std::map<std::string, RVector> functions;
    std::vector<Task> tasks;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::string& path);
Json scenario_to_json(const Scenario& s);

/// Tolerance values given on the command line. Unset fields fall back to the scenario, then to the defaults.
struct ToleranceFlags {
    std::optional<double> rank_tol;
    std::optional<double> eq_tol;
    std::optional<double> ineq_tol;
};

Tolerances resolve_tolerances(const std::map<std::string, double>& overrides, const ToleranceFlags& flags);

/// One relation check, the unit of the tabular report.
struct ReportRow {
    std::string task;
    std::string id;
    double lhs = 0;
    double bound = 0;
    double slack = 0;
    std::string verdict;
};

struct Report {
    std::string command;
    Json environment = Json::object();
    Json results = Json::array();
    std::vector<ReportRow> rows;
    std::vector<std::string> narrative;
    /// Violated relations and failed invariant checks.
    std::vector<std::string> failures;

    int exit_code() const { return failures.empty() ? exit_ok : exit_verification_failure; }
};

enum class Format { json, csv, text };

Format parse_format(const std::string& name);
std::string render(const Report& r, Format f);

Report run_verify(const Scenario& s, const ToleranceFlags& flags = {});

struct SweepOptions {
    long long count = 1000;
    std::uint64_t seed = 1;
    std::vector<int> dims = {2, 3, 4};
    std::vector<int> outcomes = {1, 2, 3, 4, 5, 6, 7, 8};
    /// 0 uses the hardware concurrency.
    int workers = 0;
    ToleranceFlags tol;
};

/// Parses "2,3,5" or "2-5" (or a mix) into a sorted list of positive integers.
std::vector<int> parse_int_list(const std::string& text, const std::string& flag);

Report run_sweep(const SweepOptions& opt);

const std::vector<std::string>& demo_names();
Report run_demo(const std::string& name, std::uint64_t seed = 1, const ToleranceFlags& flags = {});

} // namespace urel::cli
