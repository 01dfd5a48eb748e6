#include "urel/localized.hpp"

namespace urel {

LocalizedMeasurement::LocalizedMeasurement(Povm m, DensityState rho, const Tolerances& tol)
    : m_(std::move(m)),
      rho_(std::move(rho)),
      tol_(tol),
      dist_(apply(m_, rho_)),
      quantum_(std::make_shared<const LocalizedSpace>(rho_, tol)),
      classical_(std::make_shared<const LocalizedSpace>(dist_, tol)),
      pull_(pullback_map(m_, quantum_, classical_)),
      push_(pushforward_map(m_, quantum_, classical_)),
      pull_inv_(pull_),
      push_inv_(push_)
{
}

ClassObservable LocalizedMeasurement::push(const HermObservable& a) const
{
    return urel::pushforward(m_, rho_, a, tol_).values;
}

HermObservable LocalizedMeasurement::pull(const ClassObservable& f) const
{
    return quantum_->quantum_representative(quantum_->coords(adjoint_apply(m_, f)));
}

double LocalizedMeasurement::representability_residual(const HermObservable& a) const
{
    return pull_inv_.range_residual(quantum_->coords(a));
}

std::optional<ClassObservable> LocalizedMeasurement::represent(const HermObservable& a) const
{
    const RVector y = quantum_->coords(a);
    if (!pull_inv_.in_range(y)) {
        return std::nullopt;
    }
    return classical_->classical_representative(pull_inv_.apply_unchecked(y));
}

ClassObservable LocalizedMeasurement::represent_projected(const HermObservable& a) const
{
    return classical_->classical_representative(pull_inv_.apply_unchecked(quantum_->coords(a)));
}

LocalizedChannel::LocalizedChannel(StochasticChannel k, ProbDist p, const Tolerances& tol)
    : k_(std::move(k)),
      p_(std::move(p)),
      tol_(tol),
      q_(classical_apply(k_, p_)),
      in_(std::make_shared<const LocalizedSpace>(p_, tol)),
      out_(std::make_shared<const LocalizedSpace>(q_, tol)),
      pull_(classical_pullback_map(k_, in_, out_)),
      push_(classical_pushforward_map(k_, in_, out_)),
      pull_inv_(pull_)
{
}

ClassObservable LocalizedChannel::push(const ClassObservable& a) const
{
    return classical_pushforward(k_, p_, a, tol_).values;
}

ClassObservable LocalizedChannel::pull(const ClassObservable& g) const
{
    return classical_pullback(k_, g);
}

double LocalizedChannel::representability_residual(const ClassObservable& a) const
{
    return pull_inv_.range_residual(in_->coords(a));
}

std::optional<ClassObservable> LocalizedChannel::represent(const ClassObservable& a) const
{
    const RVector y = in_->coords(a);
    if (!pull_inv_.in_range(y)) {
        return std::nullopt;
    }
    return out_->classical_representative(pull_inv_.apply_unchecked(y));
}

} // namespace urel
