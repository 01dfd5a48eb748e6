#include <cstdio>

#include "internal.hpp"

namespace urel::cli {

namespace {

using namespace detail;

/// Turns the named references of one task into library objects.
class Resolver {
public:
    Resolver(const Scenario& s, const Task& t, const Tolerances& tol) : s_(s), t_(t), tol_(tol) {}

    const std::string& ref(const std::string& role) const { return t_.refs.at(role); }
    bool has(const std::string& role) const { return t_.refs.count(role) > 0; }

    DensityState state() const { return DensityState(s_.states.at(ref("state")), tol_); }
    HermObservable observable(const std::string& role) const
    {
        return HermObservable(s_.observables.at(ref(role)), tol_.eq_tol);
    }
    ClassObservable function(const std::string& role) const { return ClassObservable(s_.functions.at(ref(role))); }
    Povm measurement() const
    {
        const MeasurementSpec& m = s_.measurements.at(ref("measurement"));
        return Povm(m.outcomes, m.effects, tol_);
    }
    JointPovm joint(const std::string& name) const
    {
        const JointSpec& j = s_.joint_measurements.at(name);
        return JointPovm(j.first, j.second, j.effects, tol_);
    }
    JointSetting joint_setting() const
    {
        const JointPovm j = joint(ref("joint"));
        auto [m, n] = marginals(j);
        return JointSetting(m, n, j, state(), tol_);
    }
    LocalizedMeasurement localized() const { return LocalizedMeasurement(measurement(), state(), tol_); }
    LocalizedChannel channel() const
    {
        const ChannelSpec& c = s_.channels.at(ref("channel"));
        const StochasticChannel k(c.inputs, c.outputs, c.kernel, tol_);
        return LocalizedChannel(k, ProbDist(k.in_outcomes(), s_.distributions.at(ref("distribution")), tol_), tol_);
    }

private:
    const Scenario& s_;
    const Task& t_;
    const Tolerances& tol_;
};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

/// Runs one task, appending its payload, rows and failures to the report.
Json run_task(const Scenario& s, const Task& t, const std::string& label, const Tolerances& tol, Report& report)
{
    const Resolver r(s, t, tol);
    const std::string& k = t.kind;
    auto invariant = [&](bool ok, const std::string& what) {
        if (!ok) report.failures.push_back(label + ": " + what);
    };

    if (k == "error") return error_json(error(r.observable("observable"), r.localized()));
    if (k == "error_repr") return error_json(error_repr(r.observable("observable"), r.localized()));
    if (k == "value_error") return error_json(value_error(r.observable("observable"), r.localized()));
    if (k == "two_errors") {
        const TwoErrorsReport two = two_errors_identity(r.observable("observable"), r.localized());
        invariant(!(two.residual > tol.ineq_tol), "two-errors identity residual " + fmt(two.residual));
        return two_errors_json(two);
    }
    if (k == "errorless") {
        const ErrorlessVerdict v = errorless_conditions(r.observable("observable"), r.localized());
        invariant(v.consistent, "errorless conditions disagree");
        return errorless_json(v);
    }
    if (k == "decompositions") {
        const DecompositionReport d = decompositions(r.observable("observable"), r.function("function"), r.localized());
        invariant(!(d.max_residual() > tol.ineq_tol), "decomposition residual " + fmt(d.max_residual()));
        if (d.constrained) {
            invariant(!(d.constrained->variance_bound_slack < -tol.ineq_tol),
                      "representative variance below sigma(A)^2 + error_repr^2");
        }
        return decomposition_json(d);
    }

    std::vector<RelationReport> relations;
    if (k == "relation_error") relations.push_back(relation_error(r.observable("a"), r.observable("b"), r.localized()));
    if (k == "relation_error_repr") {
        relations.push_back(relation_error_repr(r.observable("a"), r.observable("b"), r.localized()));
    }
    if (k == "relation_representatives") {
        relations.push_back(relation_representatives(r.observable("a"), r.observable("b"), r.function("f"),
                                                     r.function("g"), r.localized()));
    }
    if (k == "relation_joint_error") {
        relations.push_back(relation_joint_error(r.observable("a"), r.observable("b"), r.joint_setting()));
    }
    if (k == "relation_joint_repr") {
        relations.push_back(relation_joint_repr(r.observable("a"), r.observable("b"), r.joint_setting()));
    }
    if (k == "relation_joint_representatives") {
        relations.push_back(relation_representatives_joint(r.observable("a"), r.observable("b"), r.function("f"),
                                                           r.function("g"), r.joint_setting()));
    }
    if (k == "relation_gauge") {
        relations.push_back(
            relation_gauge(r.observable("a"), r.observable("b"), r.function("f"), r.function("g"), r.joint_setting()));
    }
    if (k == "schrodinger") relations = schrodinger_and_kr(r.observable("a"), r.observable("b"), r.state(), tol);
    if (k == "classical_relations") {
        const auto f = r.has("f") ? std::optional(r.function("f")) : std::nullopt;
        const auto g = r.has("g") ? std::optional(r.function("g")) : std::nullopt;
        relations = classical_relations(r.function("a"), r.function("b"), f, g, r.channel());
    }
    if (!relations.empty()) {
        Json out = Json::array();
        for (const auto& rel : relations) {
            record_relation(report, label, rel);
            out.push_back(relation_json(rel));
        }
        return out;
    }

    if (k == "classical_error") return error_json(classical_error(r.function("a"), r.channel()));
    if (k == "classical_error_repr") return error_json(classical_error_repr(r.function("a"), r.channel()));
    if (k == "local_joint") return certificate_json(r.joint_setting().certificate());
    if (k == "ozawa_chain") {
        const ChainReport c = ozawa_chain(r.observable("a"), r.observable("b"), r.joint(r.ref("joint")), r.state(), tol);
        record_chain(report, label, c);
        return chain_json(c);
    }
    if (k == "akg_chains") {
        Json out = Json::array();
        for (const auto& c : akg_chains(r.observable("a"), r.observable("b"), r.joint(r.ref("joint")), r.state(), tol)) {
            record_chain(report, label, c);
            out.push_back(chain_json(c));
        }
        return out;
    }
    if (k == "nogo") {
        std::vector<NogoCandidate> candidates;
        for (const auto& name : t.ref_lists.at("joints")) {
            const JointPovm j = r.joint(name);
            auto [m, n] = marginals(j);
            candidates.push_back({m, n, j});
        }
        const NogoReport n = nogo_check(r.observable("a"), r.observable("b"), r.state(), candidates, tol);
        invariant(n.verdict != Verdict::violated, "no-go check violated: " + n.note);
        return nogo_json(n);
    }
    throw InputError(label + ": task kind has no runner");
}

} // namespace

Report run_verify(const Scenario& s, const ToleranceFlags& flags)
{
    const Tolerances tol = resolve_tolerances(s.tolerance_overrides, flags);
    Report report;
    report.command = "verify";
    report.environment = Json{{"version", kVersion}, {"tolerances", tolerances_json(tol)}, {"dim", s.dim}};

    for (std::size_t i = 0; i < s.tasks.size(); ++i) {
        const Task& t = s.tasks[i];
        const std::string label = t.name.empty() ? "#" + std::to_string(i) + " " + t.kind : t.name;
        Json entry{{"task", label}, {"kind", t.kind}};
        for (const auto& [role, ref] : t.refs) entry["refs"][role] = ref;
        for (const auto& [role, refs] : t.ref_lists) entry["refs"][role] = refs;
        try {
            entry["result"] = run_task(s, t, label, tol, report);
        } catch (const urel::Error& e) {
            throw InputError("task " + label + ": " + e.what());
        }
        report.results.push_back(std::move(entry));
    }
    return report;
}

} // namespace urel::cli
