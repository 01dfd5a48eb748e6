#include <cmath>
#include <cstdio>
#include <functional>

#include "internal.hpp"
#include "urel/oracle.hpp"

namespace urel::cli {

namespace {

using namespace detail;

constexpr double kFixtureTol = 1e-9;
constexpr int kNogoCandidates = 1000;

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

DensityState bloch(double x, double y, double z)
{
    return DensityState(CMatrix((pauli::identity() + x * pauli::x() + y * pauli::y() + z * pauli::z()) / 2.0));
}

/// Accumulates one demo: narrative lines, checked values, relation rows.
class Demo {
public:
    Demo(Report& r, std::string name) : r_(r), name_(std::move(name)) {}

    void say(const std::string& line) { r_.narrative.push_back(line); }

    void check(const std::string& what, double got, double want, double tol = kFixtureTol)
    {
        const double dev = std::abs(got - want);
        const bool ok = dev <= tol || (std::isinf(got) && got == want);
        r_.results.push_back(Json{{"check", what},
                                  {"value", number(got)},
                                  {"expected", number(want)},
                                  {"deviation", number(dev)},
                                  {"pass", ok}});
        if (!ok) r_.failures.push_back(name_ + ": " + what + " = " + fmt("%.12g", got) + ", expected " + fmt("%.12g", want));
    }

    void check(const std::string& what, bool ok)
    {
        r_.results.push_back(Json{{"check", what}, {"pass", ok}});
        if (!ok) r_.failures.push_back(name_ + ": " + what);
    }

    void relation(const RelationReport& rel)
    {
        record_relation(r_, name_, rel);
        r_.results.push_back(Json{{"relation", relation_json(rel)}});
    }

    void chain(const ChainReport& c)
    {
        record_chain(r_, name_, c);
        r_.results.push_back(Json{{"chain", chain_json(c)}});
    }

    void payload(const std::string& key, Json j) { r_.results.push_back(Json{{key, std::move(j)}}); }

private:
    Report& r_;
    std::string name_;
};

void trivial_reduction(Demo& d, std::uint64_t, const Tolerances& tol)
{
    const DensityState rho = bloch(0, 0, 1);
    const HermObservable a(pauli::x()), b(pauli::y());
    const Povm t = trivial_measurement(ProbDist(RVector::Constant(2, 0.5)), 2);
    d.say("A trivial measurement carries no information, so its errors are the standard deviations themselves.");
    d.say("Over rho = (I + sigma_z)/2 with A = sigma_x, B = sigma_y the error relation collapses to the");
    d.say("Schrodinger relation, whose bound here is |<[A,B]/2i>| = <sigma_z> = 1.");
    const RelationReport rel = relation_error(a, b, t, rho, tol);
    const auto sk = schrodinger_and_kr(a, b, rho, tol);
    d.relation(rel);
    for (const auto& s : sk) d.relation(s);
    d.check("R equals R0", *rel.components.R, *sk[0].components.R0);
    d.check("I equals I0", *rel.components.I, *sk[0].components.I0);
    d.check("error-relation bound", rel.bound, 1.0);
    d.check("Schrodinger bound", sk[0].bound, 1.0);
    d.check("Kennard-Robertson bound", sk[1].bound, 1.0);
    d.check("error of A equals its standard deviation", error(a, t, rho, tol).value, std_dev(a, rho));
}

void projective_errorless(Demo& d, std::uint64_t, const Tolerances& tol)
{
    CMatrix m(2, 2);
    m << 1.0, 0.5, 0.5, -1.0;
    const HermObservable a(m);
    const DensityState rho = bloch(0.3, 0.4, 0.0);
    const LocalizedMeasurement lm(projective_measurement_of(a), rho, tol);
    d.say("The spectral measurement of A reproduces A exactly, so every characterisation of an errorless");
    d.say("measurement must agree: zero error, zero representability error, A equal to its own pullback");
    d.say("of the pushforward, and so on.");
    const ErrorlessVerdict v = errorless_conditions(a, lm);
    d.payload("errorless", errorless_json(v));
    d.check("condition (a)", v.a);
    d.check("condition (b)", v.b);
    d.check("condition (c)", v.c);
    d.check("condition (d)", v.d);
    d.check("condition (e)", v.e);
    d.check("error", error(a, lm).value, 0.0, tol.eq_tol);
    d.check("representability error", error_repr(a, lm).value, 0.0, tol.eq_tol);
}

void noisy_qubit(Demo& d, std::uint64_t, const Tolerances& tol)
{
    const double eta = 0.5;
    const DensityState rho = bloch(0, 0, 0);
    const HermObservable a(pauli::z());
    const LocalizedMeasurement lm(unsharp_binary(pauli::z(), eta), rho, tol);
    d.say("Noisy sigma_z measurement with sharpness 1/2 over the maximally mixed state.");
    d.say("The pushforward estimator is eta * (+1, -1); the exact representative is (+1, -1) / eta.");
    const ErrorValue e = error(a, lm);
    const ErrorValue er = error_repr(a, lm);
    const TwoErrorsReport two = two_errors_identity(a, lm);
    d.payload("error", error_json(e));
    d.payload("error_repr", error_json(er));
    d.payload("two_errors", two_errors_json(two));
    d.check("error", e.value, std::sqrt(1 - eta * eta));
    d.check("representability error", er.value, std::sqrt(1 / (eta * eta) - 1));
    d.check("gap between the two estimators, squared", two.gap_sq, 9.0 / 4.0);
    d.check("two-errors identity residual", two.residual, 0.0);
    const ClassObservable rep = *lm.represent(a);
    d.check("representative at +1", rep(0), 2.0);
    d.check("representative at -1", rep(1), -2.0);
    d.check("oracle error", oracle::minimize_gauge(a, lm.povm(), rho, false).value, e.value, 1e-6);
    d.check("oracle representability error", oracle::minimize_gauge(a, lm.povm(), rho, true).value, er.value, 1e-6);
}

void akg_saturation(Demo& d, std::uint64_t, const Tolerances& tol)
{
    const double k = 1 / std::sqrt(2.0);
    const double r2 = std::sqrt(2.0);
    const DensityState rho = bloch(0, 1, 0);
    const HermObservable a(pauli::x()), b(pauli::z());
    const JointPovm j = JointPovm::unsharp_pair(pauli::x(), k, pauli::z(), k, {r2, -r2}, {r2, -r2});
    auto [m, n] = marginals(j);
    const JointSetting js(m, n, j, rho, tol);
    d.say("Joint unsharp measurement of sigma_x and sigma_z with sharpness 1/sqrt2 each, over the sigma_y");
    d.say("eigenstate. The outcome values +-sqrt2 are the exact representatives, and both the");
    d.say("representability-error relation and the representative-spread relation are saturated.");
    d.payload("certificate", certificate_json(js.certificate()));
    d.check("local joint certificate", js.certificate().holds);
    const RelationReport repr = relation_joint_repr(a, b, js);
    const RelationReport reps =
        relation_representatives_joint(a, b, *js.first().represent(a), *js.second().represent(b), js);
    d.relation(repr);
    d.relation(reps);
    d.check("representability-error product", repr.lhs, 1.0);
    d.check("representability-error bound", repr.bound, 1.0);
    d.check("representative spread product", reps.lhs, 2.0);
    d.check("representative spread bound", reps.bound, 2.0);
    for (const auto& c : akg_chains(a, b, j, rho, tol)) d.chain(c);
}

void ozawa_demo(Demo& d, std::uint64_t, const Tolerances& tol)
{
    const DensityState mixed = bloch(0, 0, 0);
    const HermObservable sz(pauli::z());
    const Povm noisy = unsharp_binary(pauli::z(), 0.5);
    const LocalizedMeasurement unit(noisy, mixed, tol);
    const LocalizedMeasurement rescaled(Povm(OutcomeSpace::numeric({2.0, -2.0}), noisy.effects(), tol), mixed, tol);
    d.say("Value error reads the estimator off the outcome values. With values +-1 on the noisy sigma_z");
    d.say("measurement it exceeds the optimal error; rescaling the values to +-2 makes them the exact");
    d.say("representative, and the value error becomes the representability error.");
    d.check("value error with values +-1", value_error(sz, unit).value, 1.0);
    d.check("error", error(sz, unit).value, std::sqrt(3.0) / 2);
    d.check("value error with values +-2", value_error(sz, rescaled).value, std::sqrt(3.0));
    d.check("representability error", error_repr(sz, rescaled).value, std::sqrt(3.0));

    d.say("The chain below runs from the value-error product to the commutator bound for a joint unsharp");
    d.say("measurement of sigma_x and sigma_z over the sigma_y eigenstate.");
    const JointPovm j = JointPovm::unsharp_pair(pauli::x(), 0.7, pauli::z(), 0.7);
    const ChainReport c = ozawa_chain(HermObservable(pauli::x()), sz, j, bloch(0, 1, 0), tol);
    d.chain(c);
    d.check("chain holds", c.verdict == Verdict::holds);
}

void nogo_sweep(Demo& d, std::uint64_t seed, const Tolerances& tol)
{
    const DensityState rho = bloch(0, 1, 0);
    const HermObservable a(pauli::x()), b(pauli::z());
    oracle::Rng rng(oracle::derive_seed(seed, 7));
    std::vector<NogoCandidate> candidates;
    for (int i = 0; i < kNogoCandidates; ++i) {
        const JointPovm j = oracle::random_joint_povm(rng, 2, 1 + i % 8, 1 + (i / 8) % 8);
        auto [m, n] = marginals(j);
        candidates.push_back({m, n, j});
    }
    d.say("sigma_x and sigma_z do not commute over the sigma_y eigenstate, so no locally jointly described");
    d.say("pair of measurements can measure both without error. " + std::to_string(kNogoCandidates) +
          " random joint measurements are probed;");
    d.say("each must leave an error of at least the guaranteed margin.");
    const NogoReport rep = nogo_check(a, b, rho, candidates, tol);
    d.payload("nogo", nogo_json(rep));
    d.check("all candidates certified", rep.certified == rep.candidates);
    d.check("no errorless pair found", !rep.errorless_found);
    d.check("guaranteed margin", rep.guaranteed_margin, std::sqrt(2.0) - 1);
    d.check("smallest max error exceeds the guaranteed margin", rep.min_max_error >= rep.guaranteed_margin - kFixtureTol);
    d.say("smallest max(error_A, error_B) over the sweep: " + fmt("%.6f", rep.min_max_error));
}

void classical_bsc(Demo& d, std::uint64_t, const Tolerances& tol)
{
    const LocalizedChannel lk(StochasticChannel::binary_symmetric(0.25), ProbDist(RVector::Constant(2, 0.5)), tol);
    const ClassObservable a{1, -1};
    const ClassObservable b{1, 2};
    d.say("Binary symmetric channel with flip probability 1/4 and a uniform input. Estimating a = (+1, -1)");
    d.say("from the output mirrors the noisy qubit: the output contracts a by 1/2, and the exact");
    d.say("representative (+2, -2) pays for its unbiasedness with a larger error.");
    d.check("error", classical_error(a, lk).value, std::sqrt(3.0) / 2);
    d.check("representability error", classical_error_repr(a, lk).value, std::sqrt(3.0));
    const ClassObservable rep = *lk.represent(a);
    d.check("representative at 0", rep(0), 2.0);
    d.check("representative at 1", rep(1), -2.0);
    for (const auto& r : classical_relations(a, b, rep, *lk.represent(b), lk)) d.relation(r);
}

using DemoFn = std::function<void(Demo&, std::uint64_t, const Tolerances&)>;

const std::vector<std::pair<std::string, DemoFn>>& demos()
{
    static const std::vector<std::pair<std::string, DemoFn>> all = {
        {"trivial-reduction", trivial_reduction}, {"projective-errorless", projective_errorless},
        {"noisy-qubit", noisy_qubit},             {"akg-saturation", akg_saturation},
        {"ozawa-chain", ozawa_demo},              {"nogo-sweep", nogo_sweep},
        {"classical-bsc", classical_bsc},
    };
    return all;
}

} // namespace

const std::vector<std::string>& demo_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : demos()) out.push_back(name);
        return out;
    }();
    return names;
}

Report run_demo(const std::string& name, std::uint64_t seed, const ToleranceFlags& flags)
{
    const Tolerances tol = resolve_tolerances({}, flags);
    for (const auto& [n, fn] : demos()) {
        if (n != name) continue;
        Report report;
        report.command = "demo";
        report.environment =
            Json{{"version", kVersion}, {"tolerances", tolerances_json(tol)}, {"demo", name}, {"seed", seed}};
        Demo d(report, name);
        fn(d, seed, tol);
        return report;
    }
    std::string known;
    for (const auto& n : demo_names()) known += (known.empty() ? "" : ", ") + n;
    throw InputError("unknown demo \"" + name + "\" (known: " + known + ")");
}

} // namespace urel::cli
