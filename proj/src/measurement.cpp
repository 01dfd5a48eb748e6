#include "urel/measurement.hpp"

#include <algorithm>
#include <cmath>

namespace urel {

namespace {

// Effects are bounded by the identity, so the floor is absolute. Without it roundoff
// eigenvalues of a projector contribute sqrt(eps) ~ 1e-8 to every gauge evaluation.
CMatrix psd_sqrt(const CMatrix& e, double floor)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(e);
    const RVector root =
        es.eigenvalues().unaryExpr([floor](double x) { return x <= floor ? 0.0 : std::sqrt(x); });
    return es.eigenvectors() * root.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

std::string effect_name(const OutcomeSpace& outcomes, int i)
{
    return "effect " + std::to_string(i) + " ('" + outcomes.labels[i] + "')";
}

} // namespace

Povm::Povm(OutcomeSpace outcomes, std::vector<CMatrix> effects, const Tolerances& tol)
    : outcomes_(std::move(outcomes)), effects_(std::move(effects))
{
    if (effects_.empty()) {
        throw InvalidArgument("POVM needs at least one effect");
    }
    if (static_cast<int>(effects_.size()) != outcomes_.size()) {
        throw DimensionMismatch("POVM has " + std::to_string(effects_.size()) + " effects for " +
                                std::to_string(outcomes_.size()) + " outcomes");
    }
    dim_ = static_cast<int>(effects_.front().rows());
    CMatrix total = CMatrix::Zero(dim_, dim_);
    for (int i = 0; i < size(); ++i) {
        CMatrix& e = effects_[i];
        if (e.rows() != dim_ || e.cols() != dim_) {
            throw DimensionMismatch(effect_name(outcomes_, i) + " has wrong shape");
        }
        if (!e.allFinite()) {
            throw InvalidArgument(effect_name(outcomes_, i) + " has non-finite entries");
        }
        if ((e - e.adjoint()).norm() > tol.eq_tol * std::max(1.0, e.norm())) {
            throw InvalidArgument(effect_name(outcomes_, i) + " is not Hermitian");
        }
        e = (e + e.adjoint()).eval() / 2.0;
        const double lo = Eigen::SelfAdjointEigenSolver<CMatrix>(e, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
        if (lo < -tol.eq_tol) {
            throw InvalidArgument(effect_name(outcomes_, i) + " is not positive semidefinite (eigenvalue " +
                                  std::to_string(lo) + ")");
        }
        total += e;
        sqrt_.push_back(psd_sqrt(e, tol.rank_tol));
    }
    const double resid = (total - CMatrix::Identity(dim_, dim_)).norm();
    if (resid > tol.eq_tol) {
        throw InvalidArgument("POVM effects do not sum to the identity (residual " + std::to_string(resid) + ")");
    }
}

StochasticChannel::StochasticChannel(OutcomeSpace in, OutcomeSpace out, RMatrix kernel, const Tolerances& tol)
    : in_(std::move(in)), out_(std::move(out)), kernel_(std::move(kernel))
{
    if (kernel_.cols() != in_.size() || kernel_.rows() != out_.size()) {
        throw DimensionMismatch("kernel shape does not match the outcome sets");
    }
    if (kernel_.size() == 0 || !kernel_.allFinite()) {
        throw InvalidArgument("kernel must be finite and non-empty");
    }
    if (kernel_.minCoeff() < -tol.prob_tol) {
        throw InvalidArgument("kernel has a negative entry");
    }
    kernel_ = kernel_.cwiseMax(0.0);
    for (int i = 0; i < in_size(); ++i) {
        const double s = kernel_.col(i).sum();
        if (std::abs(s - 1.0) > tol.eq_tol) {
            throw InvalidArgument("kernel column " + std::to_string(i) + " sums to " + std::to_string(s));
        }
        kernel_.col(i) /= s;
    }
}

StochasticChannel::StochasticChannel(RMatrix kernel, const Tolerances& tol)
    : StochasticChannel(OutcomeSpace::indexed(static_cast<int>(kernel.cols())),
                        OutcomeSpace::indexed(static_cast<int>(kernel.rows())), kernel, tol)
{
}

StochasticChannel StochasticChannel::identity(int n)
{
    return StochasticChannel(RMatrix::Identity(n, n));
}

StochasticChannel StochasticChannel::constant(const ProbDist& q, int n_in)
{
    RMatrix k = q.weights().replicate(1, n_in);
    return StochasticChannel(OutcomeSpace::indexed(n_in), q.outcomes(), k);
}

StochasticChannel StochasticChannel::binary_symmetric(double q)
{
    RMatrix k(2, 2);
    k << 1 - q, q, q, 1 - q;
    return StochasticChannel(k);
}

ProbDist apply(const Povm& m, const DensityState& rho)
{
    if (m.dim() != rho.dim()) {
        throw DimensionMismatch("POVM and state dimensions differ");
    }
    RVector p(m.size());
    for (int i = 0; i < m.size(); ++i) {
        p(i) = std::max(0.0, (m.effect(i) * rho.matrix()).trace().real());
    }
    return ProbDist(m.outcomes(), p / p.sum());
}

HermObservable adjoint_apply(const Povm& m, const ClassObservable& f)
{
    if (f.size() != m.size()) {
        throw DimensionMismatch("function has " + std::to_string(f.size()) + " values for " +
                                std::to_string(m.size()) + " outcomes");
    }
    CMatrix out = CMatrix::Zero(m.dim(), m.dim());
    for (int i = 0; i < m.size(); ++i) {
        out += f(i) * m.effect(i);
    }
    return HermObservable(out);
}

PushforwardResult pushforward(const Povm& m, const DensityState& rho, const HermObservable& a,
                              const Tolerances& tol)
{
    if (m.dim() != rho.dim() || a.dim() != rho.dim()) {
        throw DimensionMismatch("POVM, state and observable dimensions differ");
    }
    const ProbDist p = apply(m, rho);
    const CMatrix a_rho = a.matrix() * rho.matrix();
    RVector f = RVector::Zero(m.size());
    std::vector<int> support;
    for (int i = 0; i < m.size(); ++i) {
        if (p(i) > tol.prob_tol) {
            support.push_back(i);
            f(i) = (m.effect(i) * a_rho).trace().real() / p(i);
        }
    }
    return {ClassObservable(f), support};
}

HermObservable pullback(const Povm& m, const DensityState& rho, const ClassObservable& f, const Tolerances& tol)
{
    const LocalizedSpace space(rho, tol);
    return space.quantum_representative(space.coords(adjoint_apply(m, f)));
}

ProbDist classical_apply(const StochasticChannel& k, const ProbDist& p)
{
    if (p.size() != k.in_size()) {
        throw DimensionMismatch("distribution does not match channel input");
    }
    return ProbDist(k.out_outcomes(), RVector(k.kernel() * p.weights()));
}

ClassObservable classical_pullback(const StochasticChannel& k, const ClassObservable& g)
{
    if (g.size() != k.out_size()) {
        throw DimensionMismatch("function does not match channel output");
    }
    return ClassObservable(RVector(k.kernel().transpose() * g.values()));
}

PushforwardResult classical_pushforward(const StochasticChannel& k, const ProbDist& p, const ClassObservable& a,
                                        const Tolerances& tol)
{
    if (p.size() != k.in_size() || a.size() != k.in_size()) {
        throw DimensionMismatch("distribution or function does not match channel input");
    }
    const RVector q = k.kernel() * p.weights();
    const RVector weighted = k.kernel() * p.weights().cwiseProduct(a.values());
    RVector f = RVector::Zero(k.out_size());
    std::vector<int> support;
    for (int j = 0; j < k.out_size(); ++j) {
        if (q(j) > tol.prob_tol) {
            support.push_back(j);
            f(j) = weighted(j) / q(j);
        }
    }
    return {ClassObservable(f), support};
}

Povm projective_measurement_of(const HermObservable& a, double merge_tol)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
    const RVector& lambda = es.eigenvalues();
    const double radius = lambda.cwiseAbs().maxCoeff();
    const double gap = merge_tol * radius;
    const int d = a.dim();

    std::vector<double> values;
    std::vector<CMatrix> effects;
    int start = 0;
    while (start < d) {
        int end = start + 1;
        while (end < d && lambda(end) - lambda(end - 1) <= gap) {
            ++end;
        }
        CMatrix proj = CMatrix::Zero(d, d);
        double mean = 0;
        for (int i = start; i < end; ++i) {
            proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
            mean += lambda(i);
        }
        values.push_back(mean / (end - start));
        effects.push_back(proj);
        start = end;
    }
    // Descending order, so that e.g. sigma_z gives outcomes (+1, -1).
    std::reverse(values.begin(), values.end());
    std::reverse(effects.begin(), effects.end());
    return Povm(OutcomeSpace::numeric(values), effects);
}

Povm trivial_measurement(const ProbDist& p0, int dim)
{
    std::vector<CMatrix> effects;
    for (int i = 0; i < p0.size(); ++i) {
        effects.push_back(p0(i) * CMatrix::Identity(dim, dim));
    }
    return Povm(p0.outcomes(), effects);
}

Povm unsharp_binary(const CMatrix& a, double eta)
{
    const int d = static_cast<int>(a.rows());
    const CMatrix id = CMatrix::Identity(d, d);
    return Povm(OutcomeSpace::numeric({1.0, -1.0}), {(id + eta * a) / 2.0, (id - eta * a) / 2.0});
}

} // namespace urel
