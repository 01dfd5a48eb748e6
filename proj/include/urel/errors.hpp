#pragma once

#include <limits>
#include <optional>

#include "urel/localized.hpp"

namespace urel {

struct ErrorValue {
    double value = 0;
    bool finite = true;
    /// Relative distance of the observable from the range of the pullback (representability error only).
    double range_residual = 0;
    double condition_number = 1;
    /// Range residual in (eq_tol, 100 eq_tol]: too close to the range to call cleanly.
    bool ill_conditioned = false;

    static constexpr double infinity() { return std::numeric_limits<double>::infinity(); }
};

/// Gauge of estimating A by f through M over rho.
///
/// Evaluated as a sum of squares,
///   ||(A - M'f) rho^{1/2}||^2 + sum_w ||E_w^{1/2} (f(w) - M'f) rho^{1/2}||^2,
/// which equals ||A - M'f||^2 + ||f||^2 - ||M'f||^2 but does not cancel catastrophically near zero.
double gauge(const HermObservable& a, const ClassObservable& f, const Povm& m, const DensityState& rho);

/// Classical gauge of estimating a by g through K over p, in the same sum-of-squares form.
double classical_gauge(const ClassObservable& a, const ClassObservable& g, const StochasticChannel& k,
                       const ProbDist& p);

ErrorValue error(const HermObservable& a, const LocalizedMeasurement& lm);
ErrorValue error(const HermObservable& a, const Povm& m, const DensityState& rho, const Tolerances& tol = {});

struct Representability {
    bool representable = false;
    double residual = 0;
    bool ill_conditioned = false;
    double condition_number = 1;
    std::optional<ClassObservable> representative;
};

Representability is_representable(const HermObservable& a, const LocalizedMeasurement& lm);
Representability is_representable(const HermObservable& a, const Povm& m, const DensityState& rho,
                                  const Tolerances& tol = {});

/// +infinity when A is not representable.
ErrorValue error_repr(const HermObservable& a, const LocalizedMeasurement& lm);
ErrorValue error_repr(const HermObservable& a, const Povm& m, const DensityState& rho, const Tolerances& tol = {});

/// Error with respect to the outcome values x attached to M: the gauge at f = x.
ErrorValue value_error(const HermObservable& a, const LocalizedMeasurement& lm);

struct TwoErrorsReport {
    double error_sq = 0;
    double error_repr_sq = 0;
    /// ||(M^*)^- A - M_* A||^2 over M rho.
    double gap_sq = 0;
    double residual = 0;
};

/// Throws NotRepresentable.
TwoErrorsReport two_errors_identity(const HermObservable& a, const LocalizedMeasurement& lm);

struct ConstrainedDecomposition {
    double error_repr_sq = 0;
    /// ||(M^*)^- A - f||^2
    double suboptimality_sq = 0;
    double gauge_residual = 0;
    double variance = 0;
    double std_dev_sq = 0;
    double variance_residual = 0;
    /// sigma(f)^2 - sigma(A)^2 - error_repr^2
    double variance_bound_slack = 0;
    /// |sigma((M^*)^- A)^2 - sigma(A)^2 - error_repr^2|
    double optimal_variance_residual = 0;
};

struct DecompositionReport {
    double gauge_sq = 0;
    double error_sq = 0;
    /// ||M_* A - f||^2
    double suboptimality_sq = 0;
    double gauge_residual = 0;
    /// Present when f is a representative of A.
    std::optional<ConstrainedDecomposition> constrained;

    double max_residual() const;
};

DecompositionReport decompositions(const HermObservable& a, const ClassObservable& f, const LocalizedMeasurement& lm);
/// Throws ConstraintViolated when M'f is not equivalent to A, NotRepresentable if A has no representative.
ConstrainedDecomposition constrained_decomposition(const HermObservable& a, const ClassObservable& f,
                                                   const LocalizedMeasurement& lm);

struct ErrorlessVerdict {
    bool a = false;
    bool b = false;
    bool c = false;
    bool d = false;
    bool e = false;
    bool consistent = false;
    double residual_a = 0;
    double residual_b = 0;
    double residual_c = 0;
    double residual_d = 0;
    double residual_e = 0;
};

/// Each condition counts as true when its residual is at most eq_tol * max(1, ||A||_rho).
ErrorlessVerdict errorless_conditions(const HermObservable& a, const LocalizedMeasurement& lm);
ErrorlessVerdict errorless_conditions(const HermObservable& a, const Povm& m, const DensityState& rho,
                                      const Tolerances& tol = {});

ErrorValue classical_error(const ClassObservable& a, const LocalizedChannel& lk);
ErrorValue classical_error_repr(const ClassObservable& a, const LocalizedChannel& lk);

} // namespace urel
