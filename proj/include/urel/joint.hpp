#pragma once

#include <utility>
#include <vector>

#include "urel/measurement.hpp"

namespace urel {

/// POVM on a product outcome space. Effects are stored row-major: outcome (i, j)
/// sits at index i * second.size() + j.
class JointPovm {
public:
    JointPovm(OutcomeSpace first, OutcomeSpace second, std::vector<CMatrix> effects, const Tolerances& tol = {});

    /// E_(a,b) = (I + a eta_x X + b eta_z Z) / 4 for signs a, b = +1, -1; the factor outcomes
    /// carry the given values (sign +1 first).
    static JointPovm unsharp_pair(const CMatrix& x, double eta_x, const CMatrix& z, double eta_z,
                                  std::vector<double> first_values = {1.0, -1.0},
                                  std::vector<double> second_values = {1.0, -1.0});
    /// E_(i,j) = E_i when i = j and 0 otherwise: M measured jointly with itself.
    static JointPovm diagonal(const Povm& m);
    /// Product of two trivial measurements with outcome distributions p and q.
    static JointPovm trivial(const ProbDist& p, const ProbDist& q, int dim);

    const OutcomeSpace& first() const { return first_; }
    const OutcomeSpace& second() const { return second_; }
    const Povm& povm() const { return povm_; }
    int dim() const { return povm_.dim(); }
    int index(int i, int j) const { return i * second_.size() + j; }
    const CMatrix& effect(int i, int j) const { return povm_.effect(index(i, j)); }

private:
    OutcomeSpace first_;
    OutcomeSpace second_;
    Povm povm_;
};

std::pair<Povm, Povm> marginals(const JointPovm& j);

/// pi_side as a channel from the product space to the factor.
StochasticChannel marginal_projection(const JointPovm& j, int side);
StochasticChannel marginal_projection(const OutcomeSpace& first, const OutcomeSpace& second, int side);

/// Cylindrical extension of a factor function to the product space: (i, j) -> f(i) or f(j).
ClassObservable embed(const ClassObservable& f, int n_first, int n_second, int side);

/// Outcome of checking that M_i's pullback factors through J and K_i over rho.
struct JointDescriptionCertificate {
    bool holds = false;
    /// The same factorization checked on pushforwards.
    bool pushforward_holds = false;
    double max_residual = 0;
    std::vector<double> pullback_residuals_first;
    std::vector<double> pullback_residuals_second;
    std::vector<double> pushforward_residuals_first;
    std::vector<double> pushforward_residuals_second;
    /// ||M_i rho - K_i(J rho)||_1
    double distribution_residual_first = 0;
    double distribution_residual_second = 0;
};

JointDescriptionCertificate is_local_joint_description(const Povm& m, const Povm& n, const Povm& j,
                                                       const StochasticChannel& k1, const StochasticChannel& k2,
                                                       const DensityState& rho, const Tolerances& tol = {});

/// Local joint description with K_i the marginal projections.
JointDescriptionCertificate is_local_joint_measurement(const Povm& m, const Povm& n, const JointPovm& j,
                                                       const DensityState& rho, const Tolerances& tol = {});

/// Effect-level check sum_b E_(a,b) = M_a and sum_a E_(a,b) = N_b; returns the largest Frobenius residual.
double global_joint_residual(const Povm& m, const Povm& n, const JointPovm& j);

} // namespace urel
