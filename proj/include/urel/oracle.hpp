#pragma once

#include <cstdint>
#include <random>

#include "urel/joint.hpp"

namespace urel::oracle {

/// SplitMix64 step; used to derive independent per-instance seeds from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

enum class StateKind { full_rank, rank_deficient, pure };

struct RandomSpec {
    int dim = 2;
    /// Outcomes of each factor measurement.
    int n_outcomes = 2;
    std::uint64_t seed = 0;
    double rank_deficient_fraction = 0.25;
    double pure_fraction = 0.25;
};

using Rng = std::mt19937_64;

/// Normalized Wishart draw G G^dagger / Tr with G of size dim x rank.
DensityState random_state(Rng& rng, int dim, int rank);
/// Effects S^{-1/2} X_i S^{-1/2} with X_i = G_i G_i^dagger and S = sum X_i.
Povm random_povm(Rng& rng, int dim, int n_outcomes);
JointPovm random_joint_povm(Rng& rng, int dim, int n_first, int n_second);
/// (G + G^dagger) / 2 with standard complex Gaussian entries.
HermObservable random_observable(Rng& rng, int dim);
ClassObservable random_function(Rng& rng, int n);
/// Dirichlet(1,...,1) weights; each outcome is zeroed with probability zero_fraction (at least one survives).
ProbDist random_distribution(Rng& rng, int n, double zero_fraction = 0.0);
StochasticChannel random_channel(Rng& rng, int n_in, int n_out);

struct RandomInstance {
    StateKind kind;
    DensityState rho;
    JointPovm joint;
    /// Marginals of joint.
    Povm first;
    Povm second;
    HermObservable a;
    HermObservable b;
    /// Random classical observables on the first and second factor.
    ClassObservable f;
    ClassObservable g;
    /// first' f and second' g: representable by construction.
    HermObservable a_repr;
    HermObservable b_repr;
};

/// Deterministic in spec.seed.
RandomInstance random_instance(const RandomSpec& spec);

struct GaugeMinimum {
    ClassObservable f;
    double value = 0;
};

/// Squared gauge from raw traces: Tr[(A-F)^2 rho] + sum f^2 Tr[E rho] - Tr[F^2 rho] with F = sum f E.
double raw_gauge_sq(const HermObservable& a, const ClassObservable& f, const Povm& m, const DensityState& rho);

/// Minimizes the raw squared gauge over f, optionally under the constraint (sum f E - A) rho^{1/2} = 0.
/// The quadratic form is assembled by polarization of raw_gauge_sq. Throws NotRepresentable when the
/// constraint is infeasible.
GaugeMinimum minimize_gauge(const HermObservable& a, const Povm& m, const DensityState& rho, bool constrained,
                            double feasibility_tol = 1e-8);

/// Pushforward obtained by solving <A, M'g>_rho = <f, g>_{M rho} for a fixed family of test functions g.
ClassObservable pushforward_by_linear_system(const Povm& m, const DensityState& rho, const HermObservable& a,
                                             double prob_tol = 1e-12);

/// Least-norm solution of A x = y from an LU particular solution with its kernel projected out.
/// Throws NotInRange when A x = y has no solution.
RVector partial_inverse_by_constrained_solve(const RMatrix& a, const RVector& y, double eq_tol = 1e-8);

struct SampleRun {
    long long n_samples = 0;
    std::uint64_t seed = 0;
    Eigen::VectorXd counts;
    /// counts / n_samples
    RVector empirical;

    double mean(const ClassObservable& f) const;
    double variance(const ClassObservable& f) const;
};

/// n i.i.d. draws from p, split over fixed shards with derived seeds so the result
/// does not depend on the number of worker threads.
SampleRun sample(const ProbDist& p, long long n, std::uint64_t seed, int workers = 0);
SampleRun sample(const Povm& m, const DensityState& rho, long long n, std::uint64_t seed, int workers = 0);

struct MomentCheck {
    double empirical = 0;
    double expected = 0;
    double band = 0;
    bool pass = false;
};

/// |mean - <f>| <= 5 sigma(f) / sqrt(n).
MomentCheck check_mean(const SampleRun& run, const ClassObservable& f, const ProbDist& p);
/// |var - sigma^2| <= 5 sqrt((mu4 - sigma^4) / n) + 25 sigma^2 / n, mu4 the fourth central moment.
MomentCheck check_variance(const SampleRun& run, const ClassObservable& f, const ProbDist& p);

} // namespace urel::oracle
