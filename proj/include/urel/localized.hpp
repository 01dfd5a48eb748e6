#pragma once

#include <optional>

#include "urel/partial_inverse.hpp"

namespace urel {

/// A measurement together with the state it is localized over: both localized
/// spaces, the pullback/pushforward maps, and their partial inverses.
class LocalizedMeasurement {
public:
    LocalizedMeasurement(Povm m, DensityState rho, const Tolerances& tol = {});

    const Povm& povm() const { return m_; }
    const DensityState& state() const { return rho_; }
    const ProbDist& distribution() const { return dist_; }
    const Tolerances& tol() const { return tol_; }
    const LocalizedSpace& quantum_space() const { return *quantum_; }
    const LocalizedSpace& classical_space() const { return *classical_; }
    const LocalizedLinearMap& pullback() const { return pull_; }
    const LocalizedLinearMap& pushforward() const { return push_; }
    const PartialInverseMap& pullback_inverse() const { return pull_inv_; }
    const PartialInverseMap& pushforward_inverse() const { return push_inv_; }

    /// Radon–Nikodym pushforward M_* A (0 off the support).
    ClassObservable push(const HermObservable& a) const;
    /// Canonical representative of M^* f.
    HermObservable pull(const ClassObservable& f) const;
    /// Relative distance of A from the range of the pullback.
    double representability_residual(const HermObservable& a) const;
    /// Minimal-norm representative (M^*)^- A; nullopt when A is outside the range.
    std::optional<ClassObservable> represent(const HermObservable& a) const;
    /// (M^*)^- applied to the projection of A onto the range, without the range check.
    ClassObservable represent_projected(const HermObservable& a) const;

private:
    Povm m_;
    DensityState rho_;
    Tolerances tol_;
    ProbDist dist_;
    SpacePtr quantum_;
    SpacePtr classical_;
    LocalizedLinearMap pull_;
    LocalizedLinearMap push_;
    PartialInverseMap pull_inv_;
    PartialInverseMap push_inv_;
};

/// Classical counterpart: a stochastic channel localized over an input distribution.
class LocalizedChannel {
public:
    LocalizedChannel(StochasticChannel k, ProbDist p, const Tolerances& tol = {});

    const StochasticChannel& channel() const { return k_; }
    const ProbDist& input() const { return p_; }
    const ProbDist& output() const { return q_; }
    const Tolerances& tol() const { return tol_; }
    const LocalizedSpace& input_space() const { return *in_; }
    const LocalizedSpace& output_space() const { return *out_; }
    const LocalizedLinearMap& pullback() const { return pull_; }
    const LocalizedLinearMap& pushforward() const { return push_; }
    const PartialInverseMap& pullback_inverse() const { return pull_inv_; }

    ClassObservable push(const ClassObservable& a) const;
    ClassObservable pull(const ClassObservable& g) const;
    double representability_residual(const ClassObservable& a) const;
    std::optional<ClassObservable> represent(const ClassObservable& a) const;

private:
    StochasticChannel k_;
    ProbDist p_;
    Tolerances tol_;
    ProbDist q_;
    SpacePtr in_;
    SpacePtr out_;
    LocalizedLinearMap pull_;
    LocalizedLinearMap push_;
    PartialInverseMap pull_inv_;
};

} // namespace urel
