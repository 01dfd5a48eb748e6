#pragma once

#include <string>
#include <vector>

#include "urel/cli.hpp"
#include "urel/errors.hpp"
#include "urel/relations.hpp"

namespace urel::cli::detail {

enum class Section { states, observables, measurements, joint_measurements, channels, distributions, functions };

const char* section_name(Section s);

struct Role {
    std::string name;
    Section section;
    bool required = true;
    bool list = false;
};

struct TaskSignature {
    std::string kind;
    std::vector<Role> roles;
};

const std::vector<TaskSignature>& task_catalogue();
/// nullptr for unknown kinds.
const TaskSignature* find_task(const std::string& kind);

/// Non-finite numbers become null, since JSON has no infinity.
Json number(double x);
Json tolerances_json(const Tolerances& tol);
Json outcomes_json(const OutcomeSpace& o);

Json error_json(const ErrorValue& e);
Json relation_json(const RelationReport& r);
Json chain_json(const ChainReport& c);
Json certificate_json(const JointDescriptionCertificate& c);
Json errorless_json(const ErrorlessVerdict& v);
Json two_errors_json(const TwoErrorsReport& t);
Json decomposition_json(const DecompositionReport& d);
Json nogo_json(const NogoReport& n);

/// Appends the tabular row and records a failure when the relation is violated.
void record_relation(Report& report, const std::string& task, const RelationReport& r);
void record_chain(Report& report, const std::string& task, const ChainReport& c);

} // namespace urel::cli::detail
