#include "urel/joint.hpp"

#include <algorithm>

namespace urel {

namespace {

OutcomeSpace product_space(const OutcomeSpace& first, const OutcomeSpace& second)
{
    std::vector<std::string> labels;
    for (const auto& a : first.labels) {
        for (const auto& b : second.labels) {
            labels.push_back("(" + a + "," + b + ")");
        }
    }
    return OutcomeSpace(std::move(labels));
}

double max_of(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

struct SideResiduals {
    std::vector<double> pullback;
    std::vector<double> pushforward;
    double distribution = 0;
};

SideResiduals factorization_residuals(const Povm& m, const Povm& j, const StochasticChannel& k,
                                      const DensityState& rho, const ProbDist& joint_dist,
                                      const LocalizedSpace& quantum, const Tolerances& tol)
{
    if (k.in_size() != j.size() || k.out_size() != m.size()) {
        throw DimensionMismatch("mediating channel does not connect the joint and factor outcome sets");
    }
    if (m.dim() != rho.dim() || j.dim() != rho.dim()) {
        throw DimensionMismatch("measurement and state dimensions differ");
    }
    SideResiduals out;
    const ProbDist direct = apply(m, rho);
    const ProbDist composed = classical_apply(k, joint_dist);
    out.distribution = (direct.weights() - composed.weights()).lpNorm<1>();

    const LocalizedSpace classical(direct, tol);
    for (int c = 0; c < classical.rank(); ++c) {
        const ClassObservable g = classical.classical_basis(c);
        const HermObservable lhs = adjoint_apply(m, g);
        const HermObservable rhs = adjoint_apply(j, classical_pullback(k, g));
        out.pullback.push_back(seminorm(lhs - rhs, rho));
    }
    for (int q = 0; q < quantum.rank(); ++q) {
        const HermObservable a = quantum.quantum_basis(q);
        const ClassObservable lhs = pushforward(m, rho, a, tol).values;
        const ClassObservable rhs = classical_pushforward(k, joint_dist, pushforward(j, rho, a, tol).values, tol).values;
        out.pushforward.push_back(seminorm(lhs - rhs, direct));
    }
    return out;
}

} // namespace

JointPovm::JointPovm(OutcomeSpace first, OutcomeSpace second, std::vector<CMatrix> effects, const Tolerances& tol)
    : first_(std::move(first)), second_(std::move(second)), povm_(product_space(first_, second_), std::move(effects), tol)
{
}

JointPovm JointPovm::unsharp_pair(const CMatrix& x, double eta_x, const CMatrix& z, double eta_z,
                                  std::vector<double> first_values, std::vector<double> second_values)
{
    const int d = static_cast<int>(x.rows());
    const CMatrix id = CMatrix::Identity(d, d);
    std::vector<CMatrix> effects;
    for (double a : {1.0, -1.0}) {
        for (double b : {1.0, -1.0}) {
            effects.push_back((id + a * eta_x * x + b * eta_z * z) / 4.0);
        }
    }
    return JointPovm(OutcomeSpace::numeric(first_values), OutcomeSpace::numeric(second_values), effects);
}

JointPovm JointPovm::diagonal(const Povm& m)
{
    std::vector<CMatrix> effects;
    for (int i = 0; i < m.size(); ++i) {
        for (int k = 0; k < m.size(); ++k) {
            effects.push_back(i == k ? m.effect(i) : CMatrix::Zero(m.dim(), m.dim()));
        }
    }
    return JointPovm(m.outcomes(), m.outcomes(), effects);
}

JointPovm JointPovm::trivial(const ProbDist& p, const ProbDist& q, int dim)
{
    std::vector<CMatrix> effects;
    for (int i = 0; i < p.size(); ++i) {
        for (int k = 0; k < q.size(); ++k) {
            effects.push_back(p(i) * q(k) * CMatrix::Identity(dim, dim));
        }
    }
    return JointPovm(p.outcomes(), q.outcomes(), effects);
}

std::pair<Povm, Povm> marginals(const JointPovm& j)
{
    const int n1 = j.first().size();
    const int n2 = j.second().size();
    const int d = j.dim();
    std::vector<CMatrix> first(n1, CMatrix::Zero(d, d));
    std::vector<CMatrix> second(n2, CMatrix::Zero(d, d));
    for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < n2; ++b) {
            first[a] += j.effect(a, b);
            second[b] += j.effect(a, b);
        }
    }
    return {Povm(j.first(), first), Povm(j.second(), second)};
}

StochasticChannel marginal_projection(const OutcomeSpace& first, const OutcomeSpace& second, int side)
{
    if (side != 1 && side != 2) {
        throw InvalidArgument("marginal side must be 1 or 2");
    }
    const int n1 = first.size();
    const int n2 = second.size();
    RMatrix k = RMatrix::Zero(side == 1 ? n1 : n2, n1 * n2);
    for (int a = 0; a < n1; ++a) {
        for (int b = 0; b < n2; ++b) {
            k(side == 1 ? a : b, a * n2 + b) = 1.0;
        }
    }
    return StochasticChannel(product_space(first, second), side == 1 ? first : second, k);
}

StochasticChannel marginal_projection(const JointPovm& j, int side)
{
    return marginal_projection(j.first(), j.second(), side);
}

ClassObservable embed(const ClassObservable& f, int n_first, int n_second, int side)
{
    if (side != 1 && side != 2) {
        throw InvalidArgument("embedding side must be 1 or 2");
    }
    if (f.size() != (side == 1 ? n_first : n_second)) {
        throw DimensionMismatch("function does not match the factor outcome set");
    }
    RVector out(n_first * n_second);
    for (int a = 0; a < n_first; ++a) {
        for (int b = 0; b < n_second; ++b) {
            out(a * n_second + b) = side == 1 ? f(a) : f(b);
        }
    }
    return ClassObservable(out);
}

JointDescriptionCertificate is_local_joint_description(const Povm& m, const Povm& n, const Povm& j,
                                                       const StochasticChannel& k1, const StochasticChannel& k2,
                                                       const DensityState& rho, const Tolerances& tol)
{
    const ProbDist joint_dist = apply(j, rho);
    const LocalizedSpace quantum(rho, tol);
    const SideResiduals first = factorization_residuals(m, j, k1, rho, joint_dist, quantum, tol);
    const SideResiduals second = factorization_residuals(n, j, k2, rho, joint_dist, quantum, tol);

    JointDescriptionCertificate cert;
    cert.pullback_residuals_first = first.pullback;
    cert.pullback_residuals_second = second.pullback;
    cert.pushforward_residuals_first = first.pushforward;
    cert.pushforward_residuals_second = second.pushforward;
    cert.distribution_residual_first = first.distribution;
    cert.distribution_residual_second = second.distribution;

    const double dist = std::max(first.distribution, second.distribution);
    const double pull = std::max(max_of(first.pullback), max_of(second.pullback));
    const double push = std::max(max_of(first.pushforward), max_of(second.pushforward));
    cert.max_residual = std::max(pull, dist);
    cert.holds = cert.max_residual <= tol.eq_tol;
    cert.pushforward_holds = std::max(push, dist) <= tol.eq_tol;
    return cert;
}

JointDescriptionCertificate is_local_joint_measurement(const Povm& m, const Povm& n, const JointPovm& j,
                                                       const DensityState& rho, const Tolerances& tol)
{
    if (m.size() != j.first().size() || n.size() != j.second().size()) {
        throw DimensionMismatch("joint outcome factors do not match the measurements");
    }
    return is_local_joint_description(m, n, j.povm(), marginal_projection(j, 1), marginal_projection(j, 2), rho,
                                      tol);
}

double global_joint_residual(const Povm& m, const Povm& n, const JointPovm& j)
{
    if (m.size() != j.first().size() || n.size() != j.second().size() || m.dim() != j.dim() || n.dim() != j.dim()) {
        throw DimensionMismatch("joint measurement does not match the factor measurements");
    }
    const auto [first, second] = marginals(j);
    double worst = 0;
    for (int a = 0; a < m.size(); ++a) {
        worst = std::max(worst, (first.effect(a) - m.effect(a)).norm());
    }
    for (int b = 0; b < n.size(); ++b) {
        worst = std::max(worst, (second.effect(b) - n.effect(b)).norm());
    }
    return worst;
}

} // namespace urel
