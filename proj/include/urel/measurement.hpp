#pragma once

#include <vector>

#include "urel/core.hpp"

namespace urel {

/// Finite POVM: positive effects summing to the identity.
class Povm {
public:
    Povm(OutcomeSpace outcomes, std::vector<CMatrix> effects, const Tolerances& tol = {});

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(effects_.size()); }
    const OutcomeSpace& outcomes() const { return outcomes_; }
    const std::vector<CMatrix>& effects() const { return effects_; }
    const CMatrix& effect(int i) const { return effects_[i]; }
    /// Positive square root of effect i.
    const CMatrix& effect_sqrt(int i) const { return sqrt_[i]; }

private:
    int dim_ = 0;
    OutcomeSpace outcomes_;
    std::vector<CMatrix> effects_;
    std::vector<CMatrix> sqrt_;
};

/// Column-stochastic kernel: kernel(j, i) = K(out_j | in_i).
class StochasticChannel {
public:
    StochasticChannel(OutcomeSpace in, OutcomeSpace out, RMatrix kernel, const Tolerances& tol = {});
    explicit StochasticChannel(RMatrix kernel, const Tolerances& tol = {});

    static StochasticChannel identity(int n);
    /// Every input mapped to the same output distribution.
    static StochasticChannel constant(const ProbDist& q, int n_in);
    /// Flip probability q between two outcomes.
    static StochasticChannel binary_symmetric(double q);

    int in_size() const { return static_cast<int>(kernel_.cols()); }
    int out_size() const { return static_cast<int>(kernel_.rows()); }
    const OutcomeSpace& in_outcomes() const { return in_; }
    const OutcomeSpace& out_outcomes() const { return out_; }
    const RMatrix& kernel() const { return kernel_; }

private:
    OutcomeSpace in_;
    OutcomeSpace out_;
    RMatrix kernel_;
};

struct PushforwardResult {
    /// Full-length vector; entries off the support are 0.
    ClassObservable values;
    std::vector<int> support;
};

ProbDist apply(const Povm& m, const DensityState& rho);
/// M'f = sum_w f(w) E_w.
HermObservable adjoint_apply(const Povm& m, const ClassObservable& f);
/// f(w) = Re Tr[E_w A rho] / Tr[E_w rho] on the support.
PushforwardResult pushforward(const Povm& m, const DensityState& rho, const HermObservable& a,
                              const Tolerances& tol = {});
/// Canonical representative of the localized class of M'f.
HermObservable pullback(const Povm& m, const DensityState& rho, const ClassObservable& f,
                        const Tolerances& tol = {});

ProbDist classical_apply(const StochasticChannel& k, const ProbDist& p);
/// (K'g)(w) = sum_w' K(w'|w) g(w').
ClassObservable classical_pullback(const StochasticChannel& k, const ClassObservable& g);
PushforwardResult classical_pushforward(const StochasticChannel& k, const ProbDist& p, const ClassObservable& a,
                                        const Tolerances& tol = {});

/// Spectral measurement of A. Outcomes carry the distinct eigenvalues as values.
Povm projective_measurement_of(const HermObservable& a, double merge_tol = 1e-8);
/// Effects p0(w) * I on a dim-dimensional space.
Povm trivial_measurement(const ProbDist& p0, int dim);

/// Effects (I + s * eta * A) / 2 for s = +1, -1 with values +1, -1. A must square to the identity.
Povm unsharp_binary(const CMatrix& a, double eta);

} // namespace urel
