// Acceptance suite: one line per criterion, nonzero exit status when any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "urel/errors.hpp"
#include "urel/oracle.hpp"
#include "urel/relations.hpp"

using namespace urel;

namespace {

constexpr double kSlackTol = 1e-9;
constexpr double kIdentityTol = 1e-9;
constexpr double kErrorlessTol = 1e-8;
constexpr double kReductionTol = 1e-10;
constexpr double kOracleTol = 1e-6;
constexpr double kFixtureTol = 1e-9;
constexpr double kNogoFloor = 1e-3;

constexpr int kInequalityInstances = 10000;
constexpr int kIdentityInstances = 1000;
constexpr int kErrorlessInstances = 1000;
constexpr int kProjectiveStates = 100;
constexpr int kReductionInstances = 1000;
constexpr int kOracleInstances = 1000;
constexpr int kNogoInstances = 1000;
constexpr long long kSamples = 1000000;
constexpr double kRuntimeBudget = 300.0;

int workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) across threads; results come back in index order.
template <class T>
std::vector<T> parallel_map(int n, const std::function<T(int)>& body)
{
    std::vector<T> out(n);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers(); ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                out[i] = body(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    return out;
}

oracle::RandomSpec spec_for(std::uint64_t master, int i)
{
    oracle::RandomSpec s;
    s.seed = oracle::derive_seed(master, static_cast<std::uint64_t>(i));
    s.dim = 2 + i % 4;
    s.n_outcomes = 1 + (i / 4) % 8;
    return s;
}

double scaled(double residual, std::initializer_list<double> terms)
{
    double s = 1.0;
    for (double t : terms) {
        s = std::max(s, std::abs(t));
    }
    return std::abs(residual) / s;
}

struct Line {
    bool pass = false;
    std::string detail;
};

void report(int id, const char* name, const Line& line, int& failures)
{
    std::printf("criterion %d [%s] %s: %s\n", id, line.pass ? "PASS" : "FAIL", name, line.detail.c_str());
    std::fflush(stdout);
    if (!line.pass) {
        ++failures;
    }
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

DensityState bloch(double x, double y, double z)
{
    return DensityState(CMatrix((pauli::identity() + x * pauli::x() + y * pauli::y() + z * pauli::z()) / 2.0));
}

// ---------------------------------------------------------------- 1

struct InstanceSlacks {
    std::vector<RelationReport> reports;
    std::string failure;
};

InstanceSlacks inequality_instance(int i)
{
    InstanceSlacks out;
    try {
        const oracle::RandomInstance inst = oracle::random_instance(spec_for(1, i));
        oracle::Rng rng(oracle::derive_seed(1001, i));
        const LocalizedMeasurement lm(inst.first, inst.rho);
        const JointSetting js(inst.first, inst.second, inst.joint, inst.rho);
        const ClassObservable h = oracle::random_function(rng, inst.first.size());
        const HermObservable b_first = adjoint_apply(inst.first, h);

        auto& r = out.reports;
        r.push_back(relation_error(inst.a, inst.b, lm));
        r.push_back(relation_error_repr(inst.a_repr, b_first, lm));
        r.push_back(relation_representatives(inst.a_repr, b_first, inst.f, h, lm));
        r.push_back(relation_joint_error(inst.a, inst.b, js));
        r.push_back(relation_joint_repr(inst.a_repr, inst.b_repr, js));
        r.push_back(relation_representatives_joint(inst.a_repr, inst.b_repr, inst.f, inst.g, js));
        r.push_back(relation_gauge(inst.a, inst.b, inst.f, inst.g, js));
        for (auto& s : schrodinger_and_kr(inst.a, inst.b, inst.rho)) {
            r.push_back(s);
        }
        // The chains read outcome values off the joint, so label it with the representatives f and g.
        auto as_vector = [](const ClassObservable& v) {
            return std::vector<double>(v.values().data(), v.values().data() + v.values().size());
        };
        const JointPovm valued(OutcomeSpace::numeric(as_vector(inst.f)), OutcomeSpace::numeric(as_vector(inst.g)),
                               inst.joint.povm().effects());
        for (auto& link : ozawa_chain(inst.a, inst.b, valued, inst.rho).links) {
            r.push_back(link);
        }
        for (auto& chain : akg_chains(inst.a_repr, inst.b_repr, valued, inst.rho)) {
            for (auto& link : chain.links) {
                r.push_back(link);
            }
        }

        // Classical analogues over a random channel out of the first factor's outcomes.
        const int n_in = inst.first.size();
        const int n_out = 1 + static_cast<int>(rng() % 8);
        const LocalizedChannel lk(oracle::random_channel(rng, n_in, n_out), oracle::random_distribution(rng, n_in, 0.25));
        const ClassObservable g1 = oracle::random_function(rng, n_out);
        const ClassObservable g2 = oracle::random_function(rng, n_out);
        const ClassObservable a = lk.pull(g1);
        const ClassObservable b = lk.pull(g2);
        for (auto& c : classical_relations(a, b, g1, g2, lk)) {
            r.push_back(c);
        }
        const auto free = classical_relations(oracle::random_function(rng, n_in), b, std::nullopt, std::nullopt, lk);
        r.push_back(free[0]);
    } catch (const std::exception& e) {
        out.failure = "instance " + std::to_string(i) + ": " + e.what();
    }
    return out;
}

Line criterion_inequalities()
{
    const auto start = std::chrono::steady_clock::now();
    const auto results = parallel_map<InstanceSlacks>(kInequalityInstances, inequality_instance);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::map<std::string, double> min_slack;
    std::map<std::string, int> evaluated;
    int violations = 0;
    std::string first_problem;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i].failure.empty()) {
            ++violations;
            if (first_problem.empty()) first_problem = results[i].failure;
            continue;
        }
        for (const auto& r : results[i].reports) {
            if (r.verdict == Verdict::inapplicable) continue;
            ++evaluated[r.id];
            auto it = min_slack.find(r.id);
            if (it == min_slack.end() || r.slack < it->second) min_slack[r.id] = r.slack;
            if (r.slack < -kSlackTol) {
                ++violations;
                if (first_problem.empty()) {
                    first_problem = r.id + " at instance " + std::to_string(i) + " slack " + fmt("%.3e", r.slack);
                }
            }
        }
    }
    const std::vector<std::string> required = {"error", "error_repr", "representatives", "joint_error", "joint_repr",
                                               "joint_representatives", "gauge", "schrodinger", "kennard_robertson",
                                               "classical_error", "classical_error_repr", "classical_representatives",
                                               "value_error_vs_error", "drop_real_part", "ozawa_bound", "commutator",
                                               "value_error_vs_error_repr", "value_spread_vs_optimal"};
    std::string missing;
    for (const auto& id : required) {
        if (evaluated[id] < kInequalityInstances / 2) missing += " " + id;
    }
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [id, s] : min_slack) worst = std::min(worst, s);

    Line line;
    line.pass = violations == 0 && missing.empty() && elapsed <= kRuntimeBudget;
    line.detail = std::to_string(kInequalityInstances) + " instances, " + std::to_string(min_slack.size()) +
                  " relations, min slack " + fmt("%.3e", worst) + ", " + fmt("%.1f", elapsed) + " s";
    if (violations) line.detail += ", " + std::to_string(violations) + " violations (first: " + first_problem + ")";
    if (!missing.empty()) line.detail += ", too few evaluations of" + missing;
    if (elapsed > kRuntimeBudget) line.detail += ", over the runtime budget";
    return line;
}

// ---------------------------------------------------------------- 2

struct IdentityResiduals {
    std::map<std::string, double> worst;
    std::string failure;

    void note(const std::string& id, double r) { worst[id] = std::max(worst[id], r); }
};

IdentityResiduals identity_instance(int i)
{
    IdentityResiduals out;
    try {
        const oracle::RandomInstance inst = oracle::random_instance(spec_for(2, i));
        oracle::Rng rng(oracle::derive_seed(2002, i));
        const LocalizedMeasurement lm(inst.first, inst.rho);
        const ProbDist& p = lm.distribution();

        const double lhs = expectation(adjoint_apply(inst.first, inst.f), inst.rho);
        const double rhs = expectation(inst.f, p);
        out.note("adjointness", scaled(lhs - rhs, {lhs, rhs, inst.f.values().cwiseAbs().maxCoeff()}));

        const ClassObservable pushed = lm.push(inst.a);
        const LocalizedSpace& cs = lm.classical_space();
        for (int k = 0; k < cs.rank(); ++k) {
            const ClassObservable g = cs.classical_basis(k);
            const double q = quantum_inner(inst.a, adjoint_apply(inst.first, g), inst.rho);
            const double c = classical_inner(pushed, g, p);
            out.note("pushforward_characterisation", scaled(q - c, {q, c, seminorm(inst.a, inst.rho)}));
        }

        for (const PartialInverseMap* inv : {&lm.pullback_inverse(), &lm.pushforward_inverse()}) {
            const PartialInverseIdentities ids = partial_inverse_identities(*inv);
            out.note("partial_inverse_identities", ids.max());
        }
        out.note("partial_inverse_adjoint", adjoint_identity_residual(lm.pullback().matrix, lm.tol()));
        out.note("partial_inverse_adjoint",
                 (lm.pushforward_inverse().matrix() - lm.pullback_inverse().matrix().transpose()).cwiseAbs().maxCoeff() /
                     std::max(1.0, lm.pullback_inverse().matrix().cwiseAbs().maxCoeff()));

        out.note("two_errors", two_errors_identity(inst.a_repr, lm).residual);

        out.note("decompositions", decompositions(inst.a, inst.f, lm).max_residual());
        const ClassObservable opt = lm.represent(inst.a_repr).value();
        const RVector kernel = (RMatrix::Identity(cs.rank(), cs.rank()) - lm.pullback_inverse().coimage_projector()) *
                               RVector::NullaryExpr(cs.rank(), [&] { return std::normal_distribution<double>()(rng); });
        const DecompositionReport sub = decompositions(inst.a_repr, opt + cs.classical_representative(kernel), lm);
        if (!sub.constrained) {
            out.failure = "instance " + std::to_string(i) + ": shifted representative rejected";
        }
        out.note("decompositions", sub.max_residual());
        if (sub.constrained && sub.constrained->variance_bound_slack < -kIdentityTol) {
            out.note("decompositions", -sub.constrained->variance_bound_slack);
        }
    } catch (const std::exception& e) {
        out.failure = "instance " + std::to_string(i) + ": " + e.what();
    }
    return out;
}

Line criterion_identities()
{
    const auto results = parallel_map<IdentityResiduals>(kIdentityInstances, identity_instance);
    std::map<std::string, double> worst;
    std::string failure;
    for (const auto& r : results) {
        if (!r.failure.empty() && failure.empty()) failure = r.failure;
        for (const auto& [id, v] : r.worst) worst[id] = std::max(worst[id], v);
    }
    double overall = 0;
    std::string detail;
    for (const auto& [id, v] : worst) {
        overall = std::max(overall, v);
        detail += " " + id + "=" + fmt("%.1e", v);
    }
    Line line;
    line.pass = failure.empty() && overall <= kIdentityTol && worst.size() == 6;
    line.detail = std::to_string(kIdentityInstances) + " instances, max residual " + fmt("%.3e", overall) + " (" +
                  detail.substr(1) + ")";
    if (!failure.empty()) line.detail += ", " + failure;
    return line;
}

// ---------------------------------------------------------------- 3

Line criterion_errorless()
{
    struct Outcome {
        int inconsistent = 0;
        int all_true = 0;
        std::string failure;
    };
    const auto random = parallel_map<Outcome>(kErrorlessInstances, [](int i) {
        Outcome o;
        try {
            const oracle::RandomInstance inst = oracle::random_instance(spec_for(3, i));
            const LocalizedMeasurement lm(inst.first, inst.rho);
            for (const HermObservable* a : {&inst.a, &inst.a_repr}) {
                const ErrorlessVerdict v = errorless_conditions(*a, lm);
                o.inconsistent += !v.consistent;
                o.all_true += v.consistent && v.a;
            }
        } catch (const std::exception& e) {
            o.failure = e.what();
        }
        return o;
    });
    const auto projective = parallel_map<Outcome>(kProjectiveStates, [](int i) {
        Outcome o;
        try {
            oracle::Rng rng(oracle::derive_seed(3003, i));
            const int d = 2 + i % 4;
            const HermObservable a = oracle::random_observable(rng, d);
            const int rank = 1 + static_cast<int>(rng() % d);
            const LocalizedMeasurement lm(projective_measurement_of(a), oracle::random_state(rng, d, rank));
            const ErrorlessVerdict v = errorless_conditions(a, lm);
            const bool small = error(a, lm).value <= kErrorlessTol && error_repr(a, lm).value <= kErrorlessTol;
            o.all_true = v.a && v.b && v.c && v.d && v.e && small;
            o.inconsistent = !o.all_true;
        } catch (const std::exception& e) {
            o.failure = e.what();
        }
        return o;
    });
    int inconsistent = 0, all_true = 0, projective_ok = 0;
    std::string failure;
    for (const auto& o : random) {
        inconsistent += o.inconsistent;
        all_true += o.all_true;
        if (!o.failure.empty()) failure = o.failure;
    }
    for (const auto& o : projective) {
        projective_ok += o.all_true;
        if (!o.failure.empty()) failure = o.failure;
    }
    Line line;
    line.pass = inconsistent == 0 && projective_ok == kProjectiveStates && failure.empty();
    line.detail = std::to_string(2 * kErrorlessInstances) + " random verdicts, " + std::to_string(inconsistent) +
                  " inconsistent (" + std::to_string(all_true) + " all-true); projective all-true on " +
                  std::to_string(projective_ok) + "/" + std::to_string(kProjectiveStates) + " states";
    if (!failure.empty()) line.detail += ", error: " + failure;
    return line;
}

// ---------------------------------------------------------------- 4

Line criterion_reductions()
{
    const auto residuals = parallel_map<double>(kReductionInstances, [](int i) {
        try {
            oracle::Rng rng(oracle::derive_seed(4, i));
            const int d = 2 + i % 4;
            const DensityState rho = oracle::random_state(rng, d, 1 + static_cast<int>(rng() % d));
            const HermObservable a = oracle::random_observable(rng, d);
            const HermObservable b = oracle::random_observable(rng, d);
            const Povm t = trivial_measurement(oracle::random_distribution(rng, 1 + i % 8), d);
            const RelationReport rep = relation_error(a, b, t, rho);
            const auto sk = schrodinger_and_kr(a, b, rho);
            const double i0 = commutator_expectation(a, b, rho);
            return std::max({std::abs(*rep.components.R - *sk[0].components.R0),
                             std::abs(*rep.components.I - *sk[0].components.I0), std::abs(rep.bound - sk[0].bound),
                             std::abs(sk[1].bound - std::abs(i0)),
                             std::abs(rep.lhs - std_dev(a, rho) * std_dev(b, rho))});
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    });
    const double worst = *std::max_element(residuals.begin(), residuals.end());
    Line line;
    line.pass = worst <= kReductionTol;
    line.detail = std::to_string(kReductionInstances) + " trivial-measurement instances, max |R-R0|, |I-I0|, bound gap " +
                  fmt("%.3e", worst);
    return line;
}

// ---------------------------------------------------------------- 5

Line criterion_oracle()
{
    struct Gap {
        double value = 0;
        double minimizer = 0;
        std::string failure;
    };
    const auto gaps = parallel_map<Gap>(kOracleInstances, [](int i) {
        Gap g;
        try {
            const oracle::RandomInstance inst = oracle::random_instance(spec_for(5, i));
            const LocalizedMeasurement lm(inst.first, inst.rho);
            const ProbDist& p = lm.distribution();
            const oracle::GaugeMinimum free = oracle::minimize_gauge(inst.a, inst.first, inst.rho, false);
            const oracle::GaugeMinimum con = oracle::minimize_gauge(inst.a_repr, inst.first, inst.rho, true);
            g.value = std::max(std::abs(free.value - error(inst.a, lm).value),
                               std::abs(con.value - error_repr(inst.a_repr, lm).value));
            g.minimizer = std::max(seminorm(free.f - lm.push(inst.a), p), seminorm(con.f - *lm.represent(inst.a_repr), p));
        } catch (const std::exception& e) {
            g.failure = e.what();
        }
        return g;
    });
    double value = 0, minimizer = 0;
    std::string failure;
    for (const auto& g : gaps) {
        value = std::max(value, g.value);
        minimizer = std::max(minimizer, g.minimizer);
        if (!g.failure.empty()) failure = g.failure;
    }
    Line line;
    line.pass = failure.empty() && value <= kOracleTol && minimizer <= kOracleTol;
    line.detail = std::to_string(kOracleInstances) + " instances, max value gap " + fmt("%.3e", value) +
                  ", max minimizer gap " + fmt("%.3e", minimizer);
    if (!failure.empty()) line.detail += ", error: " + failure;
    return line;
}

// ---------------------------------------------------------------- 6

Line criterion_fixtures()
{
    std::vector<std::pair<std::string, double>> checks;
    auto expect = [&](const std::string& name, double got, double want) { checks.emplace_back(name, std::abs(got - want)); };

    const DensityState mixed(CMatrix(CMatrix::Identity(2, 2) / 2.0));
    const HermObservable sx(pauli::x()), sz(pauli::z());
    const double eta = 0.5;
    const Povm noisy = unsharp_binary(pauli::z(), eta);
    const LocalizedMeasurement lm(noisy, mixed);
    expect("noisy error", error(sz, lm).value, std::sqrt(1 - eta * eta));
    expect("noisy error_repr", error_repr(sz, lm).value, std::sqrt(1 / (eta * eta) - 1));
    const TwoErrorsReport two = two_errors_identity(sz, lm);
    expect("noisy gap", two.gap_sq, std::pow(1 / eta - eta, 2));
    expect("noisy gap value", two.gap_sq, 2.25);
    expect("oracle noisy error", oracle::minimize_gauge(sz, noisy, mixed, false).value, std::sqrt(3.0) / 2);
    expect("oracle noisy error_repr", oracle::minimize_gauge(sz, noisy, mixed, true).value, std::sqrt(3.0));

    const double k = 1 / std::sqrt(2.0);
    const DensityState y_plus = bloch(0, 1, 0);
    const JointPovm pair = JointPovm::unsharp_pair(pauli::x(), k, pauli::z(), k);
    auto [mx, mz] = marginals(pair);
    const JointSetting js(mx, mz, pair, y_plus);
    const RelationReport repr = relation_joint_repr(sx, sz, js);
    expect("akg error_repr lhs", repr.lhs, 1.0);
    expect("akg error_repr bound", repr.bound, 1.0);
    const RelationReport reps =
        relation_representatives_joint(sx, sz, *js.first().represent(sx), *js.second().represent(sz), js);
    expect("akg representatives lhs", reps.lhs, 2.0);
    expect("akg representatives bound", reps.bound, 2.0);
    expect("oracle akg error_repr", oracle::minimize_gauge(sx, mx, y_plus, true).value, 1.0);

    const LocalizedMeasurement plus_minus_one(noisy, mixed);
    expect("ozawa value error", value_error(sz, plus_minus_one).value, 1.0);
    expect("ozawa error", error(sz, plus_minus_one).value, std::sqrt(3.0) / 2);
    const LocalizedMeasurement rescaled(Povm(OutcomeSpace::numeric({2.0, -2.0}), noisy.effects()), mixed);
    expect("ozawa rescaled value error", value_error(sz, rescaled).value, std::sqrt(3.0));
    expect("ozawa rescaled vs error_repr", value_error(sz, rescaled).value, error_repr(sz, rescaled).value);
    expect("oracle ozawa value error", std::sqrt(oracle::raw_gauge_sq(sz, ClassObservable{1, -1}, noisy, mixed)), 1.0);

    const LocalizedChannel bsc(StochasticChannel::binary_symmetric(0.25), ProbDist(RVector::Constant(2, 0.5)));
    const ClassObservable a{1, -1};
    expect("bsc error", classical_error(a, bsc).value, std::sqrt(3.0) / 2);
    expect("bsc error_repr", classical_error_repr(a, bsc).value, std::sqrt(3.0));
    expect("bsc representative", (bsc.represent(a)->values() - RVector((RVector(2) << 2, -2).finished())).norm(), 0.0);

    double worst = 0;
    std::string worst_name;
    for (const auto& [name, gap] : checks) {
        if (worst_name.empty() || !(gap <= worst)) {
            worst = gap;
            worst_name = name;
        }
    }
    Line line;
    line.pass = std::isfinite(worst) && worst <= kFixtureTol;
    line.detail = std::to_string(checks.size()) + " fixture values, max deviation " + fmt("%.3e", worst) + " (" +
                  worst_name + ")";
    return line;
}

// ---------------------------------------------------------------- 7

Line criterion_nogo()
{
    const HermObservable sx(pauli::x()), sz(pauli::z());
    const DensityState y_plus = bloch(0, 1, 0);
    struct Probe {
        bool certified = false;
        double max_error = 0;
    };
    const auto probes = parallel_map<Probe>(kNogoInstances, [&](int i) {
        oracle::Rng rng(oracle::derive_seed(7, i));
        const JointPovm j = oracle::random_joint_povm(rng, 2, 1 + i % 8, 1 + (i / 8) % 8);
        auto [m, n] = marginals(j);
        const NogoReport rep = nogo_check(sx, sz, y_plus, {{m, n, j}});
        return Probe{rep.certified == 1, rep.min_max_error};
    });
    int certified = 0, below = 0;
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& p : probes) {
        if (!p.certified) continue;
        ++certified;
        smallest = std::min(smallest, p.max_error);
        below += p.max_error < kNogoFloor;
    }
    const double s = 2.0;
    const double margin = (-s + std::sqrt(s * s + 4)) / 2;
    Line line;
    line.pass = certified == kNogoInstances && below == 0;
    line.detail = std::to_string(certified) + "/" + std::to_string(kNogoInstances) +
                  " certified joint triples, smallest max error " + fmt("%.4f", smallest) + " (guaranteed floor " +
                  fmt("%.4f", margin) + ")";
    return line;
}

// ---------------------------------------------------------------- 8

Line criterion_monte_carlo()
{
    struct Case {
        std::string name;
        std::function<oracle::SampleRun(std::uint64_t)> run;
        ProbDist p;
        ClassObservable f;
    };
    const DensityState mixed(CMatrix(CMatrix::Identity(2, 2) / 2.0));
    const Povm noisy = unsharp_binary(pauli::z(), 0.5);
    const Povm proj = projective_measurement_of(HermObservable(pauli::z()));
    const double k = 1 / std::sqrt(2.0);
    const JointPovm pair = JointPovm::unsharp_pair(pauli::x(), k, pauli::z(), k);
    const DensityState y_plus = bloch(0, 1, 0);
    auto [mx, mz] = marginals(pair);
    const StochasticChannel bsc = StochasticChannel::binary_symmetric(0.25);
    const ProbDist half(RVector::Constant(2, 0.5));
    const ProbDist tilted(RVector((RVector(2) << 0.8, 0.2).finished()));
    const DensityState up = bloch(0.3, 0.0, 0.6);

    std::vector<Case> cases = {
        {"noisy-qubit representative", [&](std::uint64_t s) { return oracle::sample(noisy, mixed, kSamples, s); },
         apply(noisy, mixed), ClassObservable{2, -2}},
        {"noisy-qubit tilted state", [&](std::uint64_t s) { return oracle::sample(noisy, up, kSamples, s); },
         apply(noisy, up), ClassObservable{2, -2}},
        {"projective identity", [&](std::uint64_t s) { return oracle::sample(proj, mixed, kSamples, s); },
         apply(proj, mixed), ClassObservable{1, -1}},
        {"akg first marginal", [&](std::uint64_t s) { return oracle::sample(mx, y_plus, kSamples, s); },
         apply(mx, y_plus), ClassObservable{std::sqrt(2.0), -std::sqrt(2.0)}},
        {"akg second marginal", [&](std::uint64_t s) { return oracle::sample(mz, y_plus, kSamples, s); },
         apply(mz, y_plus), ClassObservable{std::sqrt(2.0), -std::sqrt(2.0)}},
        {"bsc representative",
         [&](std::uint64_t s) { return oracle::sample(classical_apply(bsc, half), kSamples, s); },
         classical_apply(bsc, half), ClassObservable{2, -2}},
        {"bsc tilted input",
         [&](std::uint64_t s) { return oracle::sample(classical_apply(bsc, tilted), kSamples, s); },
         classical_apply(bsc, tilted), ClassObservable{2, -2}},
    };
    int failed = 0;
    double worst = 0;
    std::string worst_name;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const oracle::SampleRun run = cases[c].run(oracle::derive_seed(8, c));
        for (const oracle::MomentCheck& m :
             {oracle::check_mean(run, cases[c].f, cases[c].p), oracle::check_variance(run, cases[c].f, cases[c].p)}) {
            failed += !m.pass;
            const double z = m.band > 0 ? std::abs(m.empirical - m.expected) / m.band : 0;
            if (z >= worst) {
                worst = z;
                worst_name = cases[c].name;
            }
        }
    }
    Line line;
    line.pass = failed == 0;
    line.detail = std::to_string(cases.size()) + " fixtures at n=" + std::to_string(kSamples) + ", " +
                  std::to_string(failed) + " moments outside 5 standard errors, largest deviation " +
                  fmt("%.2f", worst) + " of the band (" + worst_name + ")";
    return line;
}

} // namespace

int main()
{
    int failures = 0;
    const auto start = std::chrono::steady_clock::now();
    report(1, "inequality suite", criterion_inequalities(), failures);
    report(2, "identity suite", criterion_identities(), failures);
    report(3, "errorless equivalence", criterion_errorless(), failures);
    report(4, "trivial-measurement reductions", criterion_reductions(), failures);
    report(5, "oracle equivalence", criterion_oracle(), failures);
    report(6, "worked fixtures", criterion_fixtures(), failures);
    report(7, "no-go probe", criterion_nogo(), failures);
    report(8, "Monte Carlo consistency", criterion_monte_carlo(), failures);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d/8 criteria passed in %.1f s\n", 8 - failures, elapsed);
    return failures == 0 ? 0 : 1;
}
