#include "urel/errors.hpp"

#include <algorithm>
#include <cmath>

namespace urel {

namespace {

double representative_threshold(const HermObservable& a, const DensityState& rho, const Tolerances& tol)
{
    return tol.eq_tol * std::max(1.0, seminorm(a, rho));
}

/// |lhs - rhs| scaled down by the largest magnitude involved when that exceeds 1.
double scaled_residual(double lhs, double rhs, std::initializer_list<double> terms)
{
    double scale = std::max(1.0, std::abs(lhs));
    for (double t : terms) {
        scale = std::max(scale, std::abs(t));
    }
    return std::abs(lhs - rhs) / scale;
}

} // namespace

double gauge(const HermObservable& a, const ClassObservable& f, const Povm& m, const DensityState& rho)
{
    if (a.dim() != m.dim() || rho.dim() != m.dim()) {
        throw DimensionMismatch("observable, measurement and state dimensions differ");
    }
    const CMatrix f_op = adjoint_apply(m, f).matrix();
    const CMatrix& root = rho.sqrt();
    double total = ((a.matrix() - f_op) * root).squaredNorm();
    const CMatrix id = CMatrix::Identity(m.dim(), m.dim());
    for (int w = 0; w < m.size(); ++w) {
        total += (m.effect_sqrt(w) * (f(w) * id - f_op) * root).squaredNorm();
    }
    return std::sqrt(total);
}

double classical_gauge(const ClassObservable& a, const ClassObservable& g, const StochasticChannel& k,
                       const ProbDist& p)
{
    if (a.size() != k.in_size() || p.size() != k.in_size() || g.size() != k.out_size()) {
        throw DimensionMismatch("observables, channel and distribution do not match");
    }
    const RVector pulled = k.kernel().transpose() * g.values();
    double total = 0;
    for (int i = 0; i < k.in_size(); ++i) {
        const double d = a(i) - pulled(i);
        total += p(i) * d * d;
        for (int j = 0; j < k.out_size(); ++j) {
            const double e = g(j) - pulled(i);
            total += p(i) * k.kernel()(j, i) * e * e;
        }
    }
    return std::sqrt(total);
}

ErrorValue error(const HermObservable& a, const LocalizedMeasurement& lm)
{
    ErrorValue out;
    out.value = gauge(a, lm.push(a), lm.povm(), lm.state());
    out.condition_number = lm.pushforward_inverse().condition_number();
    return out;
}

ErrorValue error(const HermObservable& a, const Povm& m, const DensityState& rho, const Tolerances& tol)
{
    return error(a, LocalizedMeasurement(m, rho, tol));
}

Representability is_representable(const HermObservable& a, const LocalizedMeasurement& lm)
{
    Representability out;
    const double eq = lm.tol().eq_tol;
    out.residual = lm.representability_residual(a);
    out.representable = out.residual <= eq;
    out.ill_conditioned = out.residual > eq && out.residual <= 100 * eq;
    out.condition_number = lm.pullback_inverse().condition_number();
    if (out.representable) {
        out.representative = lm.represent_projected(a);
    }
    return out;
}

Representability is_representable(const HermObservable& a, const Povm& m, const DensityState& rho,
                                  const Tolerances& tol)
{
    return is_representable(a, LocalizedMeasurement(m, rho, tol));
}

ErrorValue error_repr(const HermObservable& a, const LocalizedMeasurement& lm)
{
    const Representability r = is_representable(a, lm);
    ErrorValue out;
    out.range_residual = r.residual;
    out.condition_number = r.condition_number;
    out.ill_conditioned = r.ill_conditioned;
    if (!r.representable) {
        out.value = ErrorValue::infinity();
        out.finite = false;
        return out;
    }
    out.value = gauge(a, *r.representative, lm.povm(), lm.state());
    return out;
}

ErrorValue error_repr(const HermObservable& a, const Povm& m, const DensityState& rho, const Tolerances& tol)
{
    return error_repr(a, LocalizedMeasurement(m, rho, tol));
}

ErrorValue value_error(const HermObservable& a, const LocalizedMeasurement& lm)
{
    const ClassObservable x(lm.povm().outcomes().value_vector());
    ErrorValue out;
    out.value = gauge(a, x, lm.povm(), lm.state());
    return out;
}

TwoErrorsReport two_errors_identity(const HermObservable& a, const LocalizedMeasurement& lm)
{
    const Representability r = is_representable(a, lm);
    if (!r.representable) {
        throw NotRepresentable("observable is not representable by the measurement", r.residual);
    }
    TwoErrorsReport out;
    const ClassObservable pushed = lm.push(a);
    out.error_sq = std::pow(gauge(a, pushed, lm.povm(), lm.state()), 2);
    out.error_repr_sq = std::pow(gauge(a, *r.representative, lm.povm(), lm.state()), 2);
    out.gap_sq = std::pow(seminorm(*r.representative - pushed, lm.distribution()), 2);
    out.residual = scaled_residual(out.error_repr_sq - out.error_sq, out.gap_sq, {out.error_repr_sq});
    return out;
}

double DecompositionReport::max_residual() const
{
    double r = gauge_residual;
    if (constrained) {
        r = std::max({r, constrained->gauge_residual, constrained->variance_residual,
                      constrained->optimal_variance_residual});
    }
    return r;
}

ConstrainedDecomposition constrained_decomposition(const HermObservable& a, const ClassObservable& f,
                                                   const LocalizedMeasurement& lm)
{
    const double miss = seminorm(a - adjoint_apply(lm.povm(), f), lm.state());
    if (miss > representative_threshold(a, lm.state(), lm.tol())) {
        throw ConstraintViolated("classical observable does not represent the target observable", miss);
    }
    const Representability r = is_representable(a, lm);
    const ClassObservable best = r.representable ? *r.representative : lm.represent_projected(a);

    ConstrainedDecomposition out;
    const double g_sq = std::pow(gauge(a, f, lm.povm(), lm.state()), 2);
    out.error_repr_sq = std::pow(gauge(a, best, lm.povm(), lm.state()), 2);
    out.suboptimality_sq = std::pow(seminorm(best - f, lm.distribution()), 2);
    out.gauge_residual = scaled_residual(g_sq, out.error_repr_sq + out.suboptimality_sq, {g_sq});
    out.variance = std::pow(std_dev(f, lm.distribution()), 2);
    out.std_dev_sq = std::pow(std_dev(a, lm.state()), 2);
    out.variance_residual =
        scaled_residual(out.variance, out.std_dev_sq + out.error_repr_sq + out.suboptimality_sq, {out.variance});
    out.variance_bound_slack = out.variance - out.std_dev_sq - out.error_repr_sq;
    const double best_var = std::pow(std_dev(best, lm.distribution()), 2);
    out.optimal_variance_residual = scaled_residual(best_var, out.std_dev_sq + out.error_repr_sq, {best_var});
    return out;
}

DecompositionReport decompositions(const HermObservable& a, const ClassObservable& f, const LocalizedMeasurement& lm)
{
    DecompositionReport out;
    const ClassObservable pushed = lm.push(a);
    out.gauge_sq = std::pow(gauge(a, f, lm.povm(), lm.state()), 2);
    out.error_sq = std::pow(gauge(a, pushed, lm.povm(), lm.state()), 2);
    out.suboptimality_sq = std::pow(seminorm(pushed - f, lm.distribution()), 2);
    out.gauge_residual = scaled_residual(out.gauge_sq, out.error_sq + out.suboptimality_sq, {out.gauge_sq});
    try {
        out.constrained = constrained_decomposition(a, f, lm);
    } catch (const ConstraintViolated&) {
    }
    return out;
}

ErrorlessVerdict errorless_conditions(const HermObservable& a, const LocalizedMeasurement& lm)
{
    ErrorlessVerdict v;
    const double thr = representative_threshold(a, lm.state(), lm.tol());
    const double inf = ErrorValue::infinity();
    const ErrorValue eps = error(a, lm);
    const ErrorValue eps_t = error_repr(a, lm);

    v.residual_e = eps.value;
    v.e = v.residual_e <= thr;

    const HermObservable round_trip = lm.pull(lm.push(a));
    v.residual_d = seminorm(a - round_trip, lm.state());
    v.d = v.residual_d <= thr;

    v.residual_a = eps_t.value;
    v.a = eps_t.finite && v.residual_a <= thr;

    v.residual_c = eps_t.finite ? std::abs(eps_t.value - eps.value) : inf;
    v.c = eps_t.finite && v.residual_c <= thr;

    v.residual_b = inf;
    if (eps_t.finite) {
        const RVector f_coords = lm.pullback_inverse().apply_unchecked(lm.quantum_space().coords(a));
        const PartialInverseMap& push_inv = lm.pushforward_inverse();
        if (push_inv.in_range(f_coords)) {
            const RVector back = push_inv.apply_unchecked(f_coords);
            v.residual_b = (lm.quantum_space().coords(a) - back).norm();
        }
    }
    v.b = v.residual_b <= thr;

    v.consistent = (v.a == v.b) && (v.b == v.c) && (v.c == v.d) && (v.d == v.e);
    return v;
}

ErrorlessVerdict errorless_conditions(const HermObservable& a, const Povm& m, const DensityState& rho,
                                      const Tolerances& tol)
{
    return errorless_conditions(a, LocalizedMeasurement(m, rho, tol));
}

ErrorValue classical_error(const ClassObservable& a, const LocalizedChannel& lk)
{
    ErrorValue out;
    out.value = classical_gauge(a, lk.push(a), lk.channel(), lk.input());
    return out;
}

ErrorValue classical_error_repr(const ClassObservable& a, const LocalizedChannel& lk)
{
    ErrorValue out;
    const double eq = lk.tol().eq_tol;
    out.range_residual = lk.representability_residual(a);
    out.condition_number = lk.pullback_inverse().condition_number();
    out.ill_conditioned = out.range_residual > eq && out.range_residual <= 100 * eq;
    const auto rep = lk.represent(a);
    if (!rep) {
        out.value = ErrorValue::infinity();
        out.finite = false;
        return out;
    }
    out.value = classical_gauge(a, *rep, lk.channel(), lk.input());
    return out;
}

} // namespace urel
