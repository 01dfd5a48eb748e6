#include "urel/relations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace urel {

namespace {

double representative_miss(const HermObservable& a, const ClassObservable& f, const LocalizedMeasurement& lm)
{
    return seminorm(a - adjoint_apply(lm.povm(), f), lm.state());
}

void require_representative(const HermObservable& a, const ClassObservable& f, const LocalizedMeasurement& lm,
                            const char* which)
{
    const double miss = representative_miss(a, f, lm);
    if (miss > lm.tol().eq_tol * std::max(1.0, seminorm(a, lm.state()))) {
        throw ConstraintViolated(std::string(which) + " is not a representative of its target observable", miss);
    }
}

double covariance(const HermObservable& a, const HermObservable& b, const DensityState& rho)
{
    return quantum_inner(a, b, rho) - expectation(a, rho) * expectation(b, rho);
}

Verdict combine(const std::vector<RelationReport>& links)
{
    bool any_applicable = false;
    for (const auto& l : links) {
        if (l.verdict == Verdict::violated) {
            return Verdict::violated;
        }
        any_applicable = any_applicable || l.verdict == Verdict::holds;
    }
    return any_applicable ? Verdict::holds : Verdict::inapplicable;
}

std::string certificate_failure(const JointSetting& js)
{
    return "measurements admit no local joint measurement through the given joint POVM (residual " +
           std::to_string(js.certificate().max_residual) + ")";
}

} // namespace

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::holds:
        return "holds";
    case Verdict::violated:
        return "violated";
    default:
        return "inapplicable";
    }
}

RelationReport make_report(std::string id, double lhs, double bound, BoundComponents components,
                           const Tolerances& tol)
{
    RelationReport r;
    r.id = std::move(id);
    r.lhs = lhs;
    r.bound = bound;
    r.slack = lhs - bound;
    r.components = components;
    r.verdict = r.slack >= -tol.ineq_tol ? Verdict::holds : Verdict::violated;
    return r;
}

RelationReport inapplicable_report(std::string id, std::string reason)
{
    RelationReport r;
    r.id = std::move(id);
    r.verdict = Verdict::inapplicable;
    r.note = std::move(reason);
    r.lhs = r.bound = r.slack = std::numeric_limits<double>::quiet_NaN();
    return r;
}

// ---------------------------------------------------------------- single measurement

RelationReport relation_error(const HermObservable& a, const HermObservable& b, const LocalizedMeasurement& lm)
{
    const DensityState& rho = lm.state();
    const ClassObservable fa = lm.push(a);
    const ClassObservable fb = lm.push(b);
    const double r = quantum_inner(a, b, rho) - classical_inner(fa, fb, lm.distribution());
    const double i = commutator_expectation(a, b, rho) -
                     commutator_expectation(adjoint_apply(lm.povm(), fa), b, rho) -
                     commutator_expectation(a, adjoint_apply(lm.povm(), fb), rho);
    const double lhs = error(a, lm).value * error(b, lm).value;
    RelationReport rep = make_report("error", lhs, std::hypot(r, i), {.R = r, .I = i}, lm.tol());
    rep.diagnostics["simplified_bound"] = std::abs(i);
    rep.diagnostics["simplified_slack"] = lhs - std::abs(i);
    rep.diagnostics["naive_bound"] = std::abs(commutator_expectation(a, b, rho));
    if (lhs - std::abs(i) < -lm.tol().ineq_tol) {
        rep.verdict = Verdict::violated;
        rep.note = "simplified form violated";
    }
    return rep;
}

RelationReport relation_error(const HermObservable& a, const HermObservable& b, const Povm& m,
                              const DensityState& rho, const Tolerances& tol)
{
    return relation_error(a, b, LocalizedMeasurement(m, rho, tol));
}

RelationReport relation_error_repr(const HermObservable& a, const HermObservable& b, const LocalizedMeasurement& lm)
{
    const ErrorValue ea = error_repr(a, lm);
    const ErrorValue eb = error_repr(b, lm);
    if (!ea.finite || !eb.finite) {
        RelationReport rep = inapplicable_report(
            "error_repr", std::string(!ea.finite ? "first" : "second") + " observable is not representable");
        rep.diagnostics["range_residual_first"] = ea.range_residual;
        rep.diagnostics["range_residual_second"] = eb.range_residual;
        return rep;
    }
    const DensityState& rho = lm.state();
    const ClassObservable fa = *lm.represent(a);
    const ClassObservable fb = *lm.represent(b);
    const double rt = quantum_inner(a, b, rho) - classical_inner(fa, fb, lm.distribution());
    const double i0 = commutator_expectation(a, b, rho);
    RelationReport rep = make_report("error_repr", ea.value * eb.value, std::hypot(rt, i0),
                                     {.R_tilde = rt, .I0 = i0}, lm.tol());
    rep.diagnostics["naive_bound"] = std::abs(i0);
    return rep;
}

RelationReport relation_error_repr(const HermObservable& a, const HermObservable& b, const Povm& m,
                                   const DensityState& rho, const Tolerances& tol)
{
    return relation_error_repr(a, b, LocalizedMeasurement(m, rho, tol));
}

RelationReport relation_representatives(const HermObservable& a, const HermObservable& b, const ClassObservable& f,
                                        const ClassObservable& g, const LocalizedMeasurement& lm)
{
    require_representative(a, f, lm, "first classical observable");
    require_representative(b, g, lm, "second classical observable");
    const DensityState& rho = lm.state();
    const ClassObservable fa = lm.represent_projected(a);
    const ClassObservable fb = lm.represent_projected(b);
    const double rt = quantum_inner(a, b, rho) - classical_inner(fa, fb, lm.distribution());
    const double r0 = covariance(a, b, rho);
    const double i0 = commutator_expectation(a, b, rho);
    const double bound = std::hypot(std::abs(rt) + std::abs(r0), 2 * i0);
    const double lhs = std_dev(f, lm.distribution()) * std_dev(g, lm.distribution());
    RelationReport rep = make_report("representatives", lhs, bound, {.R_tilde = rt, .I0 = i0, .R0 = r0}, lm.tol());
    const double optimal = std_dev(fa, lm.distribution()) * std_dev(fb, lm.distribution());
    rep.diagnostics["optimal_lhs"] = optimal;
    rep.diagnostics["optimal_slack"] = optimal - bound;
    return rep;
}

// ---------------------------------------------------------------- joint measurement

JointSetting::JointSetting(Povm m, Povm n, JointPovm j, const DensityState& rho, const Tolerances& tol)
    : first_(std::move(m), rho, tol),
      second_(std::move(n), rho, tol),
      joint_(std::move(j)),
      joint_dist_(apply(joint_.povm(), rho)),
      cert_(is_local_joint_measurement(first_.povm(), second_.povm(), joint_, rho, tol))
{
}

double JointSetting::cross_inner(const ClassObservable& f, const ClassObservable& g) const
{
    const int n1 = joint_.first().size();
    const int n2 = joint_.second().size();
    return classical_inner(embed(f, n1, n2, 1), embed(g, n1, n2, 2), joint_dist_);
}

namespace {

struct GaugeTerms {
    double r = 0;
    double i = 0;
};

GaugeTerms gauge_terms(const HermObservable& a, const HermObservable& b, const ClassObservable& f,
                       const ClassObservable& g, const JointSetting& js)
{
    const LocalizedMeasurement& m = js.first();
    const LocalizedMeasurement& n = js.second();
    const DensityState& rho = js.state();
    GaugeTerms t;
    t.r = quantum_inner(a, b, rho) - classical_inner(n.push(a), g, n.distribution()) -
          classical_inner(f, m.push(b), m.distribution()) + js.cross_inner(f, g);
    t.i = commutator_expectation(a, b, rho) - commutator_expectation(adjoint_apply(m.povm(), f), b, rho) -
          commutator_expectation(a, adjoint_apply(n.povm(), g), rho);
    return t;
}

} // namespace

RelationReport relation_joint_error(const HermObservable& a, const HermObservable& b, const JointSetting& js)
{
    if (!js.certificate().holds) {
        return inapplicable_report("joint_error", certificate_failure(js));
    }
    const ClassObservable fa = js.first().push(a);
    const ClassObservable gb = js.second().push(b);
    const GaugeTerms t = gauge_terms(a, b, fa, gb, js);
    const double lhs = error(a, js.first()).value * error(b, js.second()).value;
    RelationReport rep = make_report("joint_error", lhs, std::hypot(t.r, t.i), {.R = t.r, .I = t.i}, js.tol());
    rep.diagnostics["naive_bound"] = std::abs(commutator_expectation(a, b, js.state()));
    return rep;
}

RelationReport relation_joint_repr(const HermObservable& a, const HermObservable& b, const JointSetting& js)
{
    if (!js.certificate().holds) {
        return inapplicable_report("joint_repr", certificate_failure(js));
    }
    const ErrorValue ea = error_repr(a, js.first());
    const ErrorValue eb = error_repr(b, js.second());
    if (!ea.finite || !eb.finite) {
        return inapplicable_report("joint_repr", std::string(!ea.finite ? "first" : "second") +
                                                     " observable is not representable by its measurement");
    }
    const DensityState& rho = js.state();
    const ClassObservable fa = *js.first().represent(a);
    const ClassObservable gb = *js.second().represent(b);
    const double rt = quantum_inner(a, b, rho) - js.cross_inner(fa, gb);
    const double i0 = commutator_expectation(a, b, rho);
    return make_report("joint_repr", ea.value * eb.value, std::hypot(rt, i0), {.R_tilde = rt, .I0 = i0}, js.tol());
}

RelationReport relation_gauge(const HermObservable& a, const HermObservable& b, const ClassObservable& f,
                              const ClassObservable& g, const JointSetting& js)
{
    if (!js.certificate().holds) {
        return inapplicable_report("gauge", certificate_failure(js));
    }
    const GaugeTerms t = gauge_terms(a, b, f, g, js);
    const double lhs = gauge(a, f, js.first().povm(), js.state()) * gauge(b, g, js.second().povm(), js.state());
    return make_report("gauge", lhs, std::hypot(t.r, t.i), {.R = t.r, .I = t.i}, js.tol());
}

RelationReport relation_representatives_joint(const HermObservable& a, const HermObservable& b,
                                              const ClassObservable& f, const ClassObservable& g,
                                              const JointSetting& js)
{
    if (!js.certificate().holds) {
        return inapplicable_report("joint_representatives", certificate_failure(js));
    }
    require_representative(a, f, js.first(), "first classical observable");
    require_representative(b, g, js.second(), "second classical observable");
    const DensityState& rho = js.state();
    const ClassObservable fa = js.first().represent_projected(a);
    const ClassObservable gb = js.second().represent_projected(b);
    const double rt = quantum_inner(a, b, rho) - js.cross_inner(fa, gb);
    const double r0 = covariance(a, b, rho);
    const double i0 = commutator_expectation(a, b, rho);
    const double bound = std::hypot(std::abs(rt) + std::abs(r0), 2 * i0);
    const double lhs = std_dev(f, js.first().distribution()) * std_dev(g, js.second().distribution());
    RelationReport rep =
        make_report("joint_representatives", lhs, bound, {.R_tilde = rt, .I0 = i0, .R0 = r0}, js.tol());
    const double optimal = std_dev(fa, js.first().distribution()) * std_dev(gb, js.second().distribution());
    rep.diagnostics["optimal_lhs"] = optimal;
    rep.diagnostics["optimal_slack"] = optimal - bound;
    return rep;
}

// ---------------------------------------------------------------- classical

std::vector<RelationReport> classical_relations(const ClassObservable& a, const ClassObservable& b,
                                                const std::optional<ClassObservable>& f,
                                                const std::optional<ClassObservable>& g, const LocalizedChannel& lk)
{
    std::vector<RelationReport> out;
    const ProbDist& p = lk.input();
    const ProbDist& q = lk.output();
    const Tolerances& tol = lk.tol();

    const double r = classical_inner(a, b, p) - classical_inner(lk.push(a), lk.push(b), q);
    out.push_back(make_report("classical_error", classical_error(a, lk).value * classical_error(b, lk).value,
                              std::abs(r), {.R = r}, tol));

    const auto fa = lk.represent(a);
    const auto gb = lk.represent(b);
    if (!fa || !gb) {
        out.push_back(inapplicable_report("classical_error_repr", "observable is not representable by the channel"));
        out.push_back(
            inapplicable_report("classical_representatives", "observable is not representable by the channel"));
        return out;
    }
    const double rt = classical_inner(a, b, p) - classical_inner(*fa, *gb, q);
    out.push_back(make_report("classical_error_repr",
                              classical_error_repr(a, lk).value * classical_error_repr(b, lk).value, std::abs(rt),
                              {.R_tilde = rt}, tol));

    const ClassObservable ff = f.value_or(*fa);
    const ClassObservable gg = g.value_or(*gb);
    const double scale = tol.eq_tol * std::max(1.0, std::max(seminorm(a, p), seminorm(b, p)));
    const double miss_f = seminorm(a - lk.pull(ff), p);
    const double miss_g = seminorm(b - lk.pull(gg), p);
    if (std::max(miss_f, miss_g) > scale) {
        throw ConstraintViolated("classical representative does not reproduce its target", std::max(miss_f, miss_g));
    }
    const double r0 = classical_inner(a, b, p) - expectation(a, p) * expectation(b, p);
    out.push_back(make_report("classical_representatives", std_dev(ff, q) * std_dev(gg, q),
                              std::abs(rt) + std::abs(r0), {.R_tilde = rt, .R0 = r0}, tol));
    return out;
}

std::vector<RelationReport> schrodinger_and_kr(const HermObservable& a, const HermObservable& b,
                                               const DensityState& rho, const Tolerances& tol)
{
    const double lhs = std_dev(a, rho) * std_dev(b, rho);
    const double r0 = covariance(a, b, rho);
    const double i0 = commutator_expectation(a, b, rho);
    return {make_report("schrodinger", lhs, std::hypot(r0, i0), {.I0 = i0, .R0 = r0}, tol),
            make_report("kennard_robertson", lhs, std::abs(i0), {.I0 = i0}, tol)};
}

// ---------------------------------------------------------------- chains

ChainReport ozawa_chain(const HermObservable& a, const HermObservable& b, const JointPovm& j,
                        const DensityState& rho, const Tolerances& tol)
{
    ChainReport chain;
    chain.id = "ozawa";
    if (!j.first().has_values() || !j.second().has_values()) {
        chain.note = "joint outcomes carry no numeric values";
        return chain;
    }
    auto [m1, m2] = marginals(j);
    const JointSetting js(m1, m2, j, rho, tol);
    const double eo_a = value_error(a, js.first()).value;
    const double eo_b = value_error(b, js.second()).value;
    const double e_a = error(a, js.first()).value;
    const double e_b = error(b, js.second()).value;
    const RelationReport joint = relation_joint_error(a, b, js);
    if (joint.verdict == Verdict::inapplicable) {
        chain.note = joint.note;
        return chain;
    }
    const double r = *joint.components.R;
    const double i = *joint.components.I;
    const double i0 = commutator_expectation(a, b, rho);

    chain.links.push_back(make_report("value_error_vs_error", eo_a * eo_b, e_a * e_b, {}, tol));
    chain.links.push_back(joint);
    chain.links.push_back(make_report("drop_real_part", std::hypot(r, i), std::abs(i), {.R = r, .I = i}, tol));
    const double rhs = std::abs(i0) - eo_a * std_dev(b, rho) - std_dev(a, rho) * eo_b;
    chain.links.push_back(make_report("ozawa_bound", std::abs(i), rhs, {.I = i, .I0 = i0}, tol));
    chain.verdict = combine(chain.links);
    return chain;
}

std::vector<ChainReport> akg_chains(const HermObservable& a, const HermObservable& b, const JointPovm& j,
                                    const DensityState& rho, const Tolerances& tol)
{
    ChainReport errors;
    errors.id = "akg_errors";
    ChainReport spreads;
    spreads.id = "akg_std_devs";

    auto [m1, m2] = marginals(j);
    const JointSetting js(m1, m2, j, rho, tol);
    const RelationReport repr = relation_joint_repr(a, b, js);
    if (repr.verdict == Verdict::inapplicable) {
        errors.note = spreads.note = repr.note;
        return {errors, spreads};
    }
    const double rt = *repr.components.R_tilde;
    const double i0 = *repr.components.I0;
    const ClassObservable fa = *js.first().represent(a);
    const ClassObservable gb = *js.second().represent(b);
    const RelationReport reps = relation_representatives_joint(a, b, fa, gb, js);
    const double r0 = *reps.components.R0;

    // The value-based links need the outcome values themselves to be representatives.
    std::string unbiased_failure;
    std::optional<ClassObservable> xa;
    std::optional<ClassObservable> xb;
    if (!j.first().has_values() || !j.second().has_values()) {
        unbiased_failure = "joint outcomes carry no numeric values";
    } else {
        xa = ClassObservable(j.first().value_vector());
        xb = ClassObservable(j.second().value_vector());
        const double miss = std::max(representative_miss(a, *xa, js.first()), representative_miss(b, *xb, js.second()));
        if (miss > tol.eq_tol * std::max({1.0, seminorm(a, rho), seminorm(b, rho)})) {
            unbiased_failure = "outcome values are not representatives of the observables (residual " +
                               std::to_string(miss) + ")";
        }
    }

    if (unbiased_failure.empty()) {
        const double eo = value_error(a, js.first()).value * value_error(b, js.second()).value;
        errors.links.push_back(make_report("value_error_vs_error_repr", eo, repr.lhs, {}, tol));
    } else {
        errors.links.push_back(inapplicable_report("value_error_vs_error_repr", unbiased_failure));
    }
    errors.links.push_back(repr);
    errors.links.push_back(make_report("commutator", repr.bound, std::abs(i0), {.R_tilde = rt, .I0 = i0}, tol));
    errors.verdict = combine(errors.links);
    errors.note = unbiased_failure;

    if (unbiased_failure.empty()) {
        const double sv = std_dev(*xa, js.first().distribution()) * std_dev(*xb, js.second().distribution());
        spreads.links.push_back(make_report("value_spread_vs_optimal", sv, reps.lhs, {}, tol));
    } else {
        spreads.links.push_back(inapplicable_report("value_spread_vs_optimal", unbiased_failure));
    }
    spreads.links.push_back(reps);
    spreads.links.push_back(
        make_report("commutator", reps.bound, 2 * std::abs(i0), {.R_tilde = rt, .I0 = i0, .R0 = r0}, tol));
    spreads.verdict = combine(spreads.links);
    spreads.note = unbiased_failure;
    return {errors, spreads};
}

// ---------------------------------------------------------------- no-go

NogoReport nogo_check(const HermObservable& a, const HermObservable& b, const DensityState& rho,
                      const std::vector<NogoCandidate>& candidates, const Tolerances& tol)
{
    NogoReport rep;
    const double i0 = std::abs(commutator_expectation(a, b, rho));
    rep.commutator_margin = i0;
    rep.candidates = static_cast<int>(candidates.size());
    rep.min_max_error = std::numeric_limits<double>::infinity();
    if (i0 <= tol.eq_tol) {
        rep.note = "commutator expectation vanishes";
        return rep;
    }
    const double s = std_dev(a, rho) + std_dev(b, rho);
    rep.guaranteed_margin = (-s + std::sqrt(s * s + 4 * i0)) / 2;

    for (const auto& c : candidates) {
        const JointSetting js(c.first, c.second, c.joint, rho, tol);
        if (!js.certificate().holds) {
            continue;
        }
        ++rep.certified;
        const double worst = std::max(error(a, js.first()).value, error(b, js.second()).value);
        rep.min_max_error = std::min(rep.min_max_error, worst);
        if (worst <= tol.eq_tol) {
            rep.errorless_found = true;
        }
    }
    rep.verdict = rep.errorless_found ? Verdict::violated : Verdict::holds;
    if (rep.certified == 0) {
        rep.note = "no candidate passed the joint certificate";
    }
    return rep;
}

} // namespace urel
