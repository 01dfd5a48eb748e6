#include <fstream>
#include <set>
#include <sstream>

#include "internal.hpp"

namespace urel::cli {

namespace detail {

const char* section_name(Section s)
{
    switch (s) {
    case Section::states: return "states";
    case Section::observables: return "observables";
    case Section::measurements: return "measurements";
    case Section::joint_measurements: return "joint_measurements";
    case Section::channels: return "channels";
    case Section::distributions: return "distributions";
    case Section::functions: return "functions";
    }
    return "?";
}

const std::vector<TaskSignature>& task_catalogue()
{
    using S = Section;
    static const std::vector<TaskSignature> catalogue = [] {
        const Role obs{"observable", S::observables};
        const Role meas{"measurement", S::measurements};
        const Role state{"state", S::states};
        const Role a{"a", S::observables};
        const Role b{"b", S::observables};
        const Role f{"f", S::functions};
        const Role g{"g", S::functions};
        const Role joint{"joint", S::joint_measurements};
        const Role channel{"channel", S::channels};
        const Role dist{"distribution", S::distributions};
        const Role ca{"a", S::functions};
        const Role cb{"b", S::functions};

        std::vector<TaskSignature> out;
        for (const char* k : {"error", "error_repr", "value_error", "two_errors", "errorless"}) {
            out.push_back({k, {obs, meas, state}});
        }
        out.push_back({"decompositions", {obs, {"function", S::functions}, meas, state}});
        out.push_back({"relation_error", {a, b, meas, state}});
        out.push_back({"relation_error_repr", {a, b, meas, state}});
        out.push_back({"relation_representatives", {a, b, f, g, meas, state}});
        out.push_back({"relation_joint_error", {a, b, joint, state}});
        out.push_back({"relation_joint_repr", {a, b, joint, state}});
        out.push_back({"relation_joint_representatives", {a, b, f, g, joint, state}});
        out.push_back({"relation_gauge", {a, b, f, g, joint, state}});
        out.push_back({"schrodinger", {a, b, state}});
        out.push_back({"local_joint", {joint, state}});
        out.push_back({"classical_error", {ca, channel, dist}});
        out.push_back({"classical_error_repr", {ca, channel, dist}});
        out.push_back({"classical_relations",
                       {ca, cb, channel, dist, {"f", S::functions, false}, {"g", S::functions, false}}});
        out.push_back({"ozawa_chain", {a, b, joint, state}});
        out.push_back({"akg_chains", {a, b, joint, state}});
        out.push_back({"nogo", {a, b, state, {"joints", S::joint_measurements, true, true}}});
        return out;
    }();
    return catalogue;
}

const TaskSignature* find_task(const std::string& kind)
{
    for (const auto& t : task_catalogue()) {
        if (t.kind == kind) return &t;
    }
    return nullptr;
}

} // namespace detail

namespace {

using detail::Section;

const std::set<std::string> kToleranceKeys = {"rank_tol", "eq_tol", "prob_tol", "ineq_tol"};
const std::vector<std::string> kSections = {"dim",      "tolerances",    "states",    "observables", "measurements",
                                            "joint_measurements", "channels", "distributions", "functions", "tasks"};

class Parser {
public:
    explicit Parser(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& msg) const
    {
        throw InputError(source_ + ": " + (path.empty() ? "" : path + ": ") + msg);
    }

    const Json& field(const Json& obj, const std::string& key, const std::string& path) const
    {
        if (!obj.contains(key)) fail(path, "missing field \"" + key + "\"");
        return obj.at(key);
    }

    double real(const Json& v, const std::string& path) const
    {
        if (!v.is_number()) fail(path, "expected a number");
        return v.get<double>();
    }

    std::string text(const Json& v, const std::string& path) const
    {
        if (!v.is_string()) fail(path, "expected a string");
        return v.get<std::string>();
    }

    RVector vector(const Json& v, const std::string& path) const
    {
        if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of numbers");
        RVector out(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            out(static_cast<Eigen::Index>(i)) = real(v[i], path + "[" + std::to_string(i) + "]");
        }
        return out;
    }

    RMatrix real_matrix(const Json& v, const std::string& path) const
    {
        if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
        const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
        RMatrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string row_path = path + "[" + std::to_string(i) + "]";
            if (!v[i].is_array() || v[i].size() != cols || cols == 0) fail(row_path, "rows must have equal, non-zero length");
            out.row(static_cast<Eigen::Index>(i)) = vector(v[i], row_path).transpose();
        }
        return out;
    }

    /// {re: [[...]], im: [[...]]}; a bare array of rows is read as the real part.
    CMatrix complex_matrix(const Json& v, const std::string& path, int dim) const
    {
        RMatrix re;
        RMatrix im;
        if (v.is_array()) {
            re = real_matrix(v, path);
            im = RMatrix::Zero(re.rows(), re.cols());
        } else if (v.is_object()) {
            for (const auto& [k, _] : v.items()) {
                if (k != "re" && k != "im") fail(path, "unknown field \"" + k + "\"");
            }
            re = real_matrix(field(v, "re", path), path + ".re");
            im = v.contains("im") ? real_matrix(v.at("im"), path + ".im") : RMatrix::Zero(re.rows(), re.cols());
            if (im.rows() != re.rows() || im.cols() != re.cols()) fail(path, "re and im differ in shape");
        } else {
            fail(path, "expected {re, im} or an array of rows");
        }
        if (re.rows() != dim || re.cols() != dim) {
            fail(path, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix, got " +
                           std::to_string(re.rows()) + "x" + std::to_string(re.cols()));
        }
        CMatrix out(dim, dim);
        out.real() = re;
        out.imag() = im;
        return out;
    }

    OutcomeSpace outcomes(const Json& v, const std::string& path) const
    {
        if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of outcomes");
        std::vector<std::string> labels;
        std::vector<std::optional<double>> values;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string p = path + "[" + std::to_string(i) + "]";
            const Json& o = v[i];
            if (o.is_string()) {
                labels.push_back(o.get<std::string>());
                values.emplace_back();
            } else if (o.is_number()) {
                // A bare number is a valued outcome labelled by the number itself.
                OutcomeSpace n = OutcomeSpace::numeric({o.get<double>()});
                labels.push_back(n.labels[0]);
                values.push_back(n.values[0]);
            } else if (o.is_object()) {
                for (const auto& [k, _] : o.items()) {
                    if (k != "label" && k != "value") fail(p, "unknown field \"" + k + "\"");
                }
                labels.push_back(text(field(o, "label", p), p + ".label"));
                values.push_back(o.contains("value") ? std::optional<double>(real(o.at("value"), p + ".value"))
                                                     : std::nullopt);
            } else {
                fail(p, "expected an outcome label, number or {label, value}");
            }
        }
        const std::set<std::string> unique(labels.begin(), labels.end());
        if (unique.size() != labels.size()) fail(path, "duplicate outcome labels");
        return OutcomeSpace(std::move(labels), std::move(values));
    }

    std::vector<CMatrix> effects(const Json& v, const std::string& path, int dim) const
    {
        if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of effects");
        std::vector<CMatrix> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(complex_matrix(v[i], path + "[" + std::to_string(i) + "]", dim));
        }
        return out;
    }

    template <class Fn>
    void named(const Json& root, const std::string& section, Fn&& each) const
    {
        if (!root.contains(section)) return;
        const Json& obj = root.at(section);
        if (!obj.is_object()) fail(section, "expected an object of named entries");
        for (const auto& [name, value] : obj.items()) {
            if (name.empty()) fail(section, "empty name");
            each(name, value, section + "." + name);
        }
    }

    template <class Fn>
    void check(const std::string& path, Fn&& construct) const
    {
        try {
            construct();
        } catch (const urel::Error& e) {
            fail(path, e.what());
        }
    }

private:
    std::string source_;
};

std::pair<int, int> line_and_column(const std::string& text, std::size_t byte)
{
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const std::map<std::string, CMatrix>* matrices(const Scenario& s, Section sec)
{
    switch (sec) {
    case Section::states: return &s.states;
    case Section::observables: return &s.observables;
    default: return nullptr;
    }
}

bool has_entry(const Scenario& s, Section sec, const std::string& name)
{
    switch (sec) {
    case Section::states:
    case Section::observables: return matrices(s, sec)->count(name) > 0;
    case Section::measurements: return s.measurements.count(name) > 0;
    case Section::joint_measurements: return s.joint_measurements.count(name) > 0;
    case Section::channels: return s.channels.count(name) > 0;
    case Section::distributions: return s.distributions.count(name) > 0;
    case Section::functions: return s.functions.count(name) > 0;
    }
    return false;
}

Task parse_task(const Parser& p, const Scenario& s, const Json& v, const std::string& path)
{
    if (!v.is_object()) p.fail(path, "expected a task object");
    Task t;
    t.kind = p.text(p.field(v, "kind", path), path + ".kind");
    const detail::TaskSignature* sig = detail::find_task(t.kind);
    if (!sig) {
        std::string known;
        for (const auto& k : detail::task_catalogue()) known += (known.empty() ? "" : ", ") + k.kind;
        p.fail(path + ".kind", "unknown task kind \"" + t.kind + "\" (known: " + known + ")");
    }
    if (v.contains("name")) t.name = p.text(v.at("name"), path + ".name");

    std::set<std::string> seen = {"kind", "name"};
    for (const detail::Role& role : sig->roles) {
        const std::string rp = path + "." + role.name;
        seen.insert(role.name);
        if (!v.contains(role.name)) {
            if (role.required) p.fail(path, "task \"" + t.kind + "\" needs field \"" + role.name + "\"");
            continue;
        }
        auto resolve = [&](const std::string& ref, const std::string& where) {
            if (!has_entry(s, role.section, ref)) {
                p.fail(where, "unresolved reference \"" + ref + "\" (no such entry in " +
                                  detail::section_name(role.section) + ")");
            }
        };
        if (role.list) {
            const Json& arr = v.at(role.name);
            if (!arr.is_array() || arr.empty()) p.fail(rp, "expected a non-empty array of names");
            std::vector<std::string> refs;
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string ip = rp + "[" + std::to_string(i) + "]";
                refs.push_back(p.text(arr[i], ip));
                resolve(refs.back(), ip);
            }
            t.ref_lists[role.name] = std::move(refs);
        } else {
            t.refs[role.name] = p.text(v.at(role.name), rp);
            resolve(t.refs[role.name], rp);
        }
    }
    for (const auto& [k, _] : v.items()) {
        if (!seen.count(k)) p.fail(path, "unknown field \"" + k + "\" for task \"" + t.kind + "\"");
    }
    return t;
}

Json matrix_json(const CMatrix& m)
{
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json rr = Json::array();
        Json ir = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ir.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ir));
    }
    return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Json vector_json(const RVector& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json effects_json(const std::vector<CMatrix>& effects)
{
    Json out = Json::array();
    for (const auto& e : effects) out.push_back(matrix_json(e));
    return out;
}

} // namespace

Scenario parse_scenario(const std::string& text, const std::string& source)
{
    Json root;
    try {
        root = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = line_and_column(text, e.byte);
        std::string what = e.what();
        // Drop the library's "[json.exception.parse_error.101] " prefix.
        if (const auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
        throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
    }

    const Parser p(source);
    if (!root.is_object()) p.fail("", "top level must be an object");
    for (const auto& [k, _] : root.items()) {
        if (std::find(kSections.begin(), kSections.end(), k) == kSections.end()) p.fail("", "unknown section \"" + k + "\"");
    }

    Scenario s;
    const Json& dim = p.field(root, "dim", "");
    if (!dim.is_number_integer() || dim.get<long long>() < 1 || dim.get<long long>() > 64) {
        p.fail("dim", "expected an integer between 1 and 64");
    }
    s.dim = dim.get<int>();

    if (root.contains("tolerances")) {
        const Json& t = root.at("tolerances");
        if (!t.is_object()) p.fail("tolerances", "expected an object");
        for (const auto& [k, v] : t.items()) {
            if (!kToleranceKeys.count(k)) p.fail("tolerances", "unknown tolerance \"" + k + "\"");
            const double x = p.real(v, "tolerances." + k);
            if (!(x > 0)) p.fail("tolerances." + k, "must be strictly positive");
            s.tolerance_overrides[k] = x;
        }
    }
    const Tolerances tol = resolve_tolerances(s.tolerance_overrides, {});

    p.named(root, "states", [&](const std::string& name, const Json& v, const std::string& path) {
        s.states[name] = p.complex_matrix(v, path, s.dim);
        p.check(path, [&] { DensityState(s.states[name], tol); });
    });
    p.named(root, "observables", [&](const std::string& name, const Json& v, const std::string& path) {
        s.observables[name] = p.complex_matrix(v, path, s.dim);
        p.check(path, [&] { HermObservable(s.observables[name], tol.eq_tol); });
    });
    p.named(root, "measurements", [&](const std::string& name, const Json& v, const std::string& path) {
        if (!v.is_object()) p.fail(path, "expected {outcomes, effects}");
        for (const auto& [k, _] : v.items()) {
            if (k != "outcomes" && k != "effects") p.fail(path, "unknown field \"" + k + "\"");
        }
        MeasurementSpec m;
        m.effects = p.effects(p.field(v, "effects", path), path + ".effects", s.dim);
        m.outcomes = v.contains("outcomes") ? p.outcomes(v.at("outcomes"), path + ".outcomes")
                                            : OutcomeSpace::indexed(static_cast<int>(m.effects.size()));
        if (m.outcomes.size() != static_cast<int>(m.effects.size())) {
            p.fail(path, std::to_string(m.outcomes.size()) + " outcomes for " + std::to_string(m.effects.size()) +
                             " effects");
        }
        p.check(path, [&] { Povm(m.outcomes, m.effects, tol); });
        s.measurements[name] = std::move(m);
    });
    p.named(root, "joint_measurements", [&](const std::string& name, const Json& v, const std::string& path) {
        if (!v.is_object()) p.fail(path, "expected {first, second, effects}");
        for (const auto& [k, _] : v.items()) {
            if (k != "first" && k != "second" && k != "effects") p.fail(path, "unknown field \"" + k + "\"");
        }
        JointSpec j;
        j.first = p.outcomes(p.field(v, "first", path), path + ".first");
        j.second = p.outcomes(p.field(v, "second", path), path + ".second");
        j.effects = p.effects(p.field(v, "effects", path), path + ".effects", s.dim);
        if (static_cast<int>(j.effects.size()) != j.first.size() * j.second.size()) {
            p.fail(path, "expected " + std::to_string(j.first.size() * j.second.size()) +
                             " effects (first-major product of the factor outcomes), got " +
                             std::to_string(j.effects.size()));
        }
        p.check(path, [&] { JointPovm(j.first, j.second, j.effects, tol); });
        s.joint_measurements[name] = std::move(j);
    });
    p.named(root, "channels", [&](const std::string& name, const Json& v, const std::string& path) {
        if (!v.is_object()) p.fail(path, "expected {kernel, inputs, outputs}");
        for (const auto& [k, _] : v.items()) {
            if (k != "inputs" && k != "outputs" && k != "kernel") p.fail(path, "unknown field \"" + k + "\"");
        }
        ChannelSpec c;
        c.kernel = p.real_matrix(p.field(v, "kernel", path), path + ".kernel");
        c.inputs = v.contains("inputs") ? p.outcomes(v.at("inputs"), path + ".inputs")
                                        : OutcomeSpace::indexed(static_cast<int>(c.kernel.cols()));
        c.outputs = v.contains("outputs") ? p.outcomes(v.at("outputs"), path + ".outputs")
                                          : OutcomeSpace::indexed(static_cast<int>(c.kernel.rows()));
        p.check(path, [&] { StochasticChannel(c.inputs, c.outputs, c.kernel, tol); });
        s.channels[name] = std::move(c);
    });
    p.named(root, "distributions", [&](const std::string& name, const Json& v, const std::string& path) {
        s.distributions[name] = p.vector(v, path);
        p.check(path, [&] { ProbDist(s.distributions[name], tol); });
    });
    p.named(root, "functions", [&](const std::string& name, const Json& v, const std::string& path) {
        s.functions[name] = p.vector(v, path);
    });

    if (root.contains("tasks")) {
        const Json& tasks = root.at("tasks");
        if (!tasks.is_array()) p.fail("tasks", "expected an array");
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            s.tasks.push_back(parse_task(p, s, tasks[i], "tasks[" + std::to_string(i) + "]"));
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

Json scenario_to_json(const Scenario& s)
{
    Json out;
    out["dim"] = s.dim;
    if (!s.tolerance_overrides.empty()) {
        Json t;
        for (const auto& [k, v] : s.tolerance_overrides) t[k] = v;
        out["tolerances"] = t;
    }
    auto section = [&](const char* key, auto const& entries, auto&& convert) {
        if (entries.empty()) return;
        Json obj = Json::object();
        for (const auto& [name, value] : entries) obj[name] = convert(value);
        out[key] = std::move(obj);
    };
    section("states", s.states, matrix_json);
    section("observables", s.observables, matrix_json);
    section("measurements", s.measurements, [](const MeasurementSpec& m) {
        return Json{{"outcomes", detail::outcomes_json(m.outcomes)}, {"effects", effects_json(m.effects)}};
    });
    section("joint_measurements", s.joint_measurements, [](const JointSpec& j) {
        return Json{{"first", detail::outcomes_json(j.first)},
                    {"second", detail::outcomes_json(j.second)},
                    {"effects", effects_json(j.effects)}};
    });
    section("channels", s.channels, [](const ChannelSpec& c) {
        Json kernel = Json::array();
        for (Eigen::Index i = 0; i < c.kernel.rows(); ++i) kernel.push_back(vector_json(c.kernel.row(i).transpose()));
        return Json{{"inputs", detail::outcomes_json(c.inputs)},
                    {"outputs", detail::outcomes_json(c.outputs)},
                    {"kernel", std::move(kernel)}};
    });
    section("distributions", s.distributions, vector_json);
    section("functions", s.functions, vector_json);
    if (!s.tasks.empty()) {
        Json tasks = Json::array();
        for (const Task& t : s.tasks) {
            Json j;
            j["kind"] = t.kind;
            if (!t.name.empty()) j["name"] = t.name;
            for (const auto& [k, v] : t.refs) j[k] = v;
            for (const auto& [k, v] : t.ref_lists) j[k] = v;
            tasks.push_back(std::move(j));
        }
        out["tasks"] = std::move(tasks);
    }
    return out;
}

} // namespace urel::cli
