#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "internal.hpp"

namespace urel::cli {

namespace detail {

Json number(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json tolerances_json(const Tolerances& tol)
{
    return Json{{"rank_tol", tol.rank_tol}, {"eq_tol", tol.eq_tol}, {"prob_tol", tol.prob_tol}, {"ineq_tol", tol.ineq_tol}};
}

Json outcomes_json(const OutcomeSpace& o)
{
    Json out = Json::array();
    for (int i = 0; i < o.size(); ++i) {
        Json e{{"label", o.labels[i]}};
        if (o.values[i]) e["value"] = *o.values[i];
        out.push_back(std::move(e));
    }
    return out;
}

Json error_json(const ErrorValue& e)
{
    return Json{{"value", number(e.value)},
                {"finite", e.finite},
                {"range_residual", number(e.range_residual)},
                {"condition_number", number(e.condition_number)},
                {"ill_conditioned", e.ill_conditioned}};
}

Json relation_json(const RelationReport& r)
{
    Json out{{"id", r.id},
             {"lhs", number(r.lhs)},
             {"bound", number(r.bound)},
             {"slack", number(r.slack)},
             {"verdict", to_string(r.verdict)}};
    Json comps = Json::object();
    const std::pair<const char*, const std::optional<double>*> fields[] = {{"R", &r.components.R},
                                                                           {"I", &r.components.I},
                                                                           {"R_tilde", &r.components.R_tilde},
                                                                           {"I0", &r.components.I0},
                                                                           {"R0", &r.components.R0}};
    for (const auto& [name, value] : fields) {
        if (*value) comps[name] = number(**value);
    }
    if (!comps.empty()) out["components"] = std::move(comps);
    if (!r.note.empty()) out["note"] = r.note;
    if (!r.diagnostics.empty()) {
        Json d = Json::object();
        for (const auto& [k, v] : r.diagnostics) d[k] = number(v);
        out["diagnostics"] = std::move(d);
    }
    return out;
}

Json chain_json(const ChainReport& c)
{
    Json links = Json::array();
    for (const auto& l : c.links) links.push_back(relation_json(l));
    Json out{{"id", c.id}, {"verdict", to_string(c.verdict)}, {"links", std::move(links)}};
    if (!c.note.empty()) out["note"] = c.note;
    return out;
}

Json certificate_json(const JointDescriptionCertificate& c)
{
    return Json{{"holds", c.holds},
                {"pushforward_holds", c.pushforward_holds},
                {"max_residual", number(c.max_residual)},
                {"distribution_residual_first", number(c.distribution_residual_first)},
                {"distribution_residual_second", number(c.distribution_residual_second)}};
}

Json errorless_json(const ErrorlessVerdict& v)
{
    return Json{{"conditions", {{"a", v.a}, {"b", v.b}, {"c", v.c}, {"d", v.d}, {"e", v.e}}},
                {"consistent", v.consistent},
                {"residuals",
                 {{"a", number(v.residual_a)},
                  {"b", number(v.residual_b)},
                  {"c", number(v.residual_c)},
                  {"d", number(v.residual_d)},
                  {"e", number(v.residual_e)}}}};
}

Json two_errors_json(const TwoErrorsReport& t)
{
    return Json{{"error_sq", number(t.error_sq)},
                {"error_repr_sq", number(t.error_repr_sq)},
                {"gap_sq", number(t.gap_sq)},
                {"residual", number(t.residual)}};
}

Json decomposition_json(const DecompositionReport& d)
{
    Json out{{"gauge_sq", number(d.gauge_sq)},
             {"error_sq", number(d.error_sq)},
             {"suboptimality_sq", number(d.suboptimality_sq)},
             {"gauge_residual", number(d.gauge_residual)}};
    if (d.constrained) {
        const ConstrainedDecomposition& c = *d.constrained;
        out["constrained"] = Json{{"error_repr_sq", number(c.error_repr_sq)},
                                  {"suboptimality_sq", number(c.suboptimality_sq)},
                                  {"gauge_residual", number(c.gauge_residual)},
                                  {"variance", number(c.variance)},
                                  {"std_dev_sq", number(c.std_dev_sq)},
                                  {"variance_residual", number(c.variance_residual)},
                                  {"variance_bound_slack", number(c.variance_bound_slack)},
                                  {"optimal_variance_residual", number(c.optimal_variance_residual)}};
    }
    out["max_residual"] = number(d.max_residual());
    return out;
}

Json nogo_json(const NogoReport& n)
{
    Json out{{"verdict", to_string(n.verdict)},
             {"commutator_margin", number(n.commutator_margin)},
             {"guaranteed_margin", number(n.guaranteed_margin)},
             {"candidates", n.candidates},
             {"certified", n.certified},
             {"min_max_error", number(n.min_max_error)},
             {"errorless_found", n.errorless_found}};
    if (!n.note.empty()) out["note"] = n.note;
    return out;
}

void record_relation(Report& report, const std::string& task, const RelationReport& r)
{
    report.rows.push_back({task, r.id, r.lhs, r.bound, r.slack, to_string(r.verdict)});
    if (r.verdict == Verdict::violated) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", r.slack);
        report.failures.push_back(task + ": " + r.id + " violated (slack " + buf + ")");
    }
}

void record_chain(Report& report, const std::string& task, const ChainReport& c)
{
    for (const auto& link : c.links) record_relation(report, task + "/" + c.id, link);
}

} // namespace detail

Tolerances resolve_tolerances(const std::map<std::string, double>& overrides, const ToleranceFlags& flags)
{
    Tolerances tol;
    const std::pair<const char*, double*> fields[] = {
        {"rank_tol", &tol.rank_tol}, {"eq_tol", &tol.eq_tol}, {"prob_tol", &tol.prob_tol}, {"ineq_tol", &tol.ineq_tol}};
    for (const auto& [key, slot] : fields) {
        if (auto it = overrides.find(key); it != overrides.end()) *slot = it->second;
    }
    if (flags.rank_tol) tol.rank_tol = *flags.rank_tol;
    if (flags.eq_tol) tol.eq_tol = *flags.eq_tol;
    if (flags.ineq_tol) tol.ineq_tol = *flags.ineq_tol;
    try {
        tol.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return tol;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag)
{
    std::set<int> out;
    std::stringstream ss(text);
    std::string item;
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty() || v < 1) throw InputError(flag + ": expected positive integers, got \"" + text + "\"");
        return v;
    };
    while (std::getline(ss, item, ',')) {
        if (const auto dash = item.find('-'); dash != std::string::npos) {
            const int lo = to_int(item.substr(0, dash));
            const int hi = to_int(item.substr(dash + 1));
            if (hi < lo) throw InputError(flag + ": empty range \"" + item + "\"");
            for (int v = lo; v <= hi; ++v) out.insert(v);
        } else {
            out.insert(to_int(item));
        }
    }
    if (out.empty()) throw InputError(flag + ": empty list");
    return {out.begin(), out.end()};
}

Format parse_format(const std::string& name)
{
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    if (name == "text") return Format::text;
    throw InputError("unknown format \"" + name + "\" (expected json, csv or text)");
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fmt_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string csv_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string render(const Report& r, Format f)
{
    switch (f) {
    case Format::json: {
        Json out;
        out["command"] = r.command;
        out["environment"] = r.environment;
        if (!r.narrative.empty()) out["narrative"] = r.narrative;
        out["results"] = r.results;
        out["failures"] = r.failures;
        out["verdict"] = r.failures.empty() ? "pass" : "fail";
        return out.dump(2) + "\n";
    }
    case Format::csv: {
        std::string out = "task,id,lhs,bound,slack,verdict\n";
        for (const auto& row : r.rows) {
            out += csv_field(row.task) + "," + csv_field(row.id) + "," + csv_number(row.lhs) + "," +
                   csv_number(row.bound) + "," + csv_number(row.slack) + "," + row.verdict + "\n";
        }
        return out;
    }
    case Format::text: {
        std::ostringstream os;
        for (const auto& line : r.narrative) os << line << "\n";
        if (!r.narrative.empty() && !r.rows.empty()) os << "\n";
        char buf[256];
        if (r.results.is_array()) {
            for (const auto& entry : r.results) {
                if (entry.contains("task") && entry["result"].is_object()) {
                    // Scalar fields of non-relation payloads, e.g. error values and certificates.
                    os << entry["task"].get<std::string>() << ":";
                    for (const auto& [key, value] : entry["result"].items()) {
                        if (value.is_primitive()) os << " " << key << "=" << value.dump();
                    }
                    os << "\n";
                }
                if (!entry.contains("check")) continue;
                const std::string name = entry["check"].get<std::string>();
                const char* status = entry["pass"].get<bool>() ? "ok" : "FAIL";
                if (entry.contains("value")) {
                    const auto num = [](const Json& v) { return v.is_null() ? "inf" : fmt_number(v.get<double>()); };
                    std::snprintf(buf, sizeof buf, "check %-52s %-20s expected %-20s %s\n", name.c_str(),
                                  num(entry["value"]).c_str(), num(entry["expected"]).c_str(), status);
                } else {
                    std::snprintf(buf, sizeof buf, "check %-52s %s\n", name.c_str(), status);
                }
                os << buf;
            }
        }
        for (const auto& row : r.rows) {
            std::snprintf(buf, sizeof buf, "%-28s %-28s lhs %-12.6g bound %-12.6g slack %-11.3e %s\n", row.task.c_str(),
                          row.id.c_str(), row.lhs, row.bound, row.slack, row.verdict.c_str());
            os << buf;
        }
        for (const auto& fail : r.failures) os << "FAILED: " << fail << "\n";
        os << (r.failures.empty() ? "verdict: pass" : "verdict: fail") << "\n";
        return os.str();
    }
    }
    return {};
}

} // namespace urel::cli
