#include <algorithm>
#include <atomic>
#include <cstdio>
#include <limits>
#include <thread>

#include "internal.hpp"
#include "urel/oracle.hpp"

namespace urel::cli {

namespace {

using namespace detail;

constexpr std::size_t kMaxListedFailures = 20;

struct InstanceResult {
    std::vector<RelationReport> relations;
    std::vector<std::pair<std::string, double>> residuals;
    int ill_conditioned = 0;
    std::string error;
};

void collect_links(std::vector<RelationReport>& out, const ChainReport& c)
{
    for (const auto& l : c.links) out.push_back(l);
}

InstanceResult run_instance(const oracle::RandomSpec& spec, const Tolerances& tol)
{
    InstanceResult out;
    try {
        const oracle::RandomInstance inst = oracle::random_instance(spec);
        oracle::Rng rng(oracle::derive_seed(spec.seed, 1));
        const LocalizedMeasurement lm(inst.first, inst.rho, tol);
        const JointSetting js(inst.first, inst.second, inst.joint, inst.rho, tol);
        const ClassObservable h = oracle::random_function(rng, inst.first.size());
        const HermObservable b_first = adjoint_apply(inst.first, h);

        auto& r = out.relations;
        r.push_back(relation_error(inst.a, inst.b, lm));
        r.push_back(relation_error_repr(inst.a_repr, b_first, lm));
        r.push_back(relation_representatives(inst.a_repr, b_first, inst.f, h, lm));
        r.push_back(relation_joint_error(inst.a, inst.b, js));
        r.push_back(relation_joint_repr(inst.a_repr, inst.b_repr, js));
        r.push_back(relation_representatives_joint(inst.a_repr, inst.b_repr, inst.f, inst.g, js));
        r.push_back(relation_gauge(inst.a, inst.b, inst.f, inst.g, js));
        for (auto& s : schrodinger_and_kr(inst.a, inst.b, inst.rho, tol)) r.push_back(s);

        auto values = [](const ClassObservable& v) {
            return std::vector<double>(v.values().data(), v.values().data() + v.values().size());
        };
        const JointPovm valued(OutcomeSpace::numeric(values(inst.f)), OutcomeSpace::numeric(values(inst.g)),
                               inst.joint.povm().effects(), tol);
        collect_links(r, ozawa_chain(inst.a, inst.b, valued, inst.rho, tol));
        for (const auto& c : akg_chains(inst.a_repr, inst.b_repr, valued, inst.rho, tol)) collect_links(r, c);

        const int n_out = 1 + static_cast<int>(rng() % 8);
        const LocalizedChannel lk(oracle::random_channel(rng, inst.first.size(), n_out),
                                  oracle::random_distribution(rng, inst.first.size(), 0.25), tol);
        const ClassObservable g1 = oracle::random_function(rng, n_out);
        const ClassObservable g2 = oracle::random_function(rng, n_out);
        for (auto& c : classical_relations(lk.pull(g1), lk.pull(g2), g1, g2, lk)) r.push_back(c);

        auto& res = out.residuals;
        res.emplace_back("two_errors", two_errors_identity(inst.a_repr, lm).residual);
        const DecompositionReport d = decompositions(inst.a_repr, inst.f, lm);
        double decomposition = d.max_residual();
        if (d.constrained) decomposition = std::max(decomposition, -d.constrained->variance_bound_slack);
        res.emplace_back("decompositions", decomposition);
        res.emplace_back("partial_inverse_identities",
                         std::max(partial_inverse_identities(lm.pullback_inverse()).max(),
                                  partial_inverse_identities(lm.pushforward_inverse()).max()));
        res.emplace_back("adjoint_identity", adjoint_identity_residual(lm.pullback().matrix, tol));
        res.emplace_back("errorless_consistency", errorless_conditions(inst.a, lm).consistent ? 0.0 : 1.0);
        res.emplace_back("joint_certificate", js.certificate().holds ? 0.0 : 1.0);

        out.ill_conditioned += error_repr(inst.a, lm).ill_conditioned;
        out.ill_conditioned += error_repr(inst.a_repr, lm).ill_conditioned;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

struct RelationStats {
    long long evaluated = 0;
    long long inapplicable = 0;
    long long violated = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    double lhs = 0;
    double bound = 0;
    long long argmin = -1;
};

struct ResidualStats {
    double max = 0;
    long long argmax = -1;
    long long failed = 0;
};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

} // namespace

Report run_sweep(const SweepOptions& opt)
{
    if (opt.count < 0) throw InputError("--count must be non-negative");
    if (opt.dims.empty() || opt.outcomes.empty()) throw InputError("--dims and --outcomes must be non-empty");
    for (int d : opt.dims) {
        if (d < 1 || d > 16) throw InputError("--dims entries must lie in 1..16");
    }
    const Tolerances tol = resolve_tolerances({}, opt.tol);

    const auto nd = static_cast<long long>(opt.dims.size());
    const auto no = static_cast<long long>(opt.outcomes.size());
    std::vector<InstanceResult> results(static_cast<std::size_t>(opt.count));
    std::atomic<long long> next{0};
    const int workers = opt.workers > 0 ? opt.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (long long i = next++; i < opt.count; i = next++) {
                oracle::RandomSpec spec;
                spec.seed = oracle::derive_seed(opt.seed, static_cast<std::uint64_t>(i));
                spec.dim = opt.dims[static_cast<std::size_t>(i % nd)];
                spec.n_outcomes = opt.outcomes[static_cast<std::size_t>((i / nd) % no)];
                results[static_cast<std::size_t>(i)] = run_instance(spec, tol);
            }
        });
    }
    for (auto& t : pool) t.join();

    Report report;
    report.command = "sweep";
    report.environment = Json{{"version", kVersion},
                              {"tolerances", tolerances_json(tol)},
                              {"seed", opt.seed},
                              {"count", opt.count},
                              {"dims", opt.dims},
                              {"outcomes", opt.outcomes}};

    std::map<std::string, RelationStats> relations;
    std::map<std::string, ResidualStats> residuals;
    long long ill_conditioned = 0;
    long long errors = 0;
    std::vector<std::string> failures;
    auto fail = [&](const std::string& what) {
        if (failures.size() < kMaxListedFailures) failures.push_back(what);
        else if (failures.size() == kMaxListedFailures) failures.push_back("further failures omitted");
    };

    for (std::size_t i = 0; i < results.size(); ++i) {
        const InstanceResult& res = results[i];
        const auto idx = static_cast<long long>(i);
        if (!res.error.empty()) {
            ++errors;
            fail("instance " + std::to_string(i) + ": " + res.error);
            continue;
        }
        ill_conditioned += res.ill_conditioned;
        for (const auto& rel : res.relations) {
            RelationStats& st = relations[rel.id];
            if (rel.verdict == Verdict::inapplicable) {
                ++st.inapplicable;
                continue;
            }
            ++st.evaluated;
            if (rel.slack < st.min_slack) {
                st.min_slack = rel.slack;
                st.lhs = rel.lhs;
                st.bound = rel.bound;
                st.argmin = idx;
            }
            if (rel.verdict == Verdict::violated) {
                ++st.violated;
                fail("instance " + std::to_string(i) + ": " + rel.id + " violated (slack " + fmt(rel.slack) + ")");
            }
        }
        for (const auto& [id, value] : res.residuals) {
            ResidualStats& st = residuals[id];
            if (!(value <= st.max) || st.argmax < 0) {
                st.max = value;
                st.argmax = idx;
            }
            if (!(value <= tol.ineq_tol)) {
                ++st.failed;
                fail("instance " + std::to_string(i) + ": " + id + " residual " + fmt(value));
            }
        }
    }

    Json rel_json = Json::object();
    for (const auto& [id, st] : relations) {
        rel_json[id] = Json{{"evaluated", st.evaluated},
                            {"inapplicable", st.inapplicable},
                            {"violated", st.violated},
                            {"min_slack", st.evaluated ? number(st.min_slack) : Json(nullptr)},
                            {"instance", st.argmin}};
        if (st.evaluated) {
            report.rows.push_back({"sweep", id, st.lhs, st.bound, st.min_slack, st.violated ? "violated" : "holds"});
        }
    }
    Json inv_json = Json::object();
    for (const auto& [id, st] : residuals) {
        inv_json[id] = Json{{"max_residual", number(st.max)}, {"instance", st.argmax}, {"failed", st.failed}};
    }
    report.results = Json{{"instances", opt.count},
                          {"instance_errors", errors},
                          {"ill_conditioned", ill_conditioned},
                          {"relations", std::move(rel_json)},
                          {"invariants", std::move(inv_json)}};
    report.failures = std::move(failures);
    return report;
}

} // namespace urel::cli
