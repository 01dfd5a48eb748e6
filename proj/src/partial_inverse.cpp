#include "urel/partial_inverse.hpp"

#include <algorithm>
#include <cmath>

namespace urel {

namespace {

double max_abs(const RMatrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_kind(const LocalizedSpace& s, SpaceKind kind, const char* what)
{
    if (s.kind() != kind) {
        throw InvalidArgument(std::string(what) + " has the wrong kind");
    }
}

} // namespace

LocalizedLinearMap::LocalizedLinearMap(SpacePtr domain_, SpacePtr codomain_, RMatrix matrix_, const Tolerances& tol_)
    : domain(std::move(domain_)), codomain(std::move(codomain_)), matrix(std::move(matrix_)), tol(tol_)
{
    if (matrix.rows() != codomain->rank() || matrix.cols() != domain->rank()) {
        throw DimensionMismatch("map matrix shape does not match the ranks of its spaces");
    }
}

LocalizedLinearMap pullback_map(const Povm& m, SpacePtr quantum, SpacePtr classical)
{
    require_kind(*quantum, SpaceKind::quantum, "pullback codomain");
    require_kind(*classical, SpaceKind::classical, "pullback domain");
    if (m.dim() != quantum->base_dim() || m.size() != classical->base_dim()) {
        throw DimensionMismatch("measurement does not match the localized spaces");
    }
    const auto& support = classical->support();
    const auto& p = classical->retained_spectrum();
    RMatrix out(quantum->rank(), classical->rank());
    for (int j = 0; j < classical->rank(); ++j) {
        const CMatrix scaled = m.effect(support[j]) / std::sqrt(p(j));
        out.col(j) = quantum->chart() * hermitian_coordinates(scaled);
    }
    return LocalizedLinearMap(classical, quantum, out, quantum->tol());
}

LocalizedLinearMap pushforward_map(const Povm& m, SpacePtr quantum, SpacePtr classical)
{
    require_kind(*quantum, SpaceKind::quantum, "pushforward domain");
    require_kind(*classical, SpaceKind::classical, "pushforward codomain");
    if (m.dim() != quantum->base_dim() || m.size() != classical->base_dim()) {
        throw DimensionMismatch("measurement does not match the localized spaces");
    }
    const DensityState& rho = *quantum->state();
    const auto& support = classical->support();
    RMatrix out(classical->rank(), quantum->rank());
    for (int k = 0; k < quantum->rank(); ++k) {
        const PushforwardResult f = pushforward(m, rho, quantum->quantum_basis(k), quantum->tol());
        RVector c(classical->rank());
        for (int j = 0; j < classical->rank(); ++j) {
            c(j) = classical->chart()(j, support[j]) * f.values(support[j]);
        }
        out.col(k) = c;
    }
    return LocalizedLinearMap(quantum, classical, out, quantum->tol());
}

LocalizedLinearMap classical_pullback_map(const StochasticChannel& k, SpacePtr input, SpacePtr output)
{
    require_kind(*input, SpaceKind::classical, "channel input space");
    require_kind(*output, SpaceKind::classical, "channel output space");
    if (k.in_size() != input->base_dim() || k.out_size() != output->base_dim()) {
        throw DimensionMismatch("channel does not match the localized spaces");
    }
    RMatrix out(input->rank(), output->rank());
    for (int j = 0; j < output->rank(); ++j) {
        const ClassObservable g = output->classical_basis(j);
        out.col(j) = input->coords(classical_pullback(k, g));
    }
    return LocalizedLinearMap(output, input, out, input->tol());
}

LocalizedLinearMap classical_pushforward_map(const StochasticChannel& k, SpacePtr input, SpacePtr output)
{
    require_kind(*input, SpaceKind::classical, "channel input space");
    require_kind(*output, SpaceKind::classical, "channel output space");
    if (k.in_size() != input->base_dim() || k.out_size() != output->base_dim()) {
        throw DimensionMismatch("channel does not match the localized spaces");
    }
    const ProbDist& p = *input->distribution();
    RMatrix out(output->rank(), input->rank());
    for (int i = 0; i < input->rank(); ++i) {
        const ClassObservable a = input->classical_basis(i);
        out.col(i) = output->coords(classical_pushforward(k, p, a, input->tol()).values);
    }
    return LocalizedLinearMap(input, output, out, input->tol());
}

LocalizedLinearMap build_map(MapKind kind, const Povm& m, const DensityState& rho, const Tolerances& tol)
{
    auto quantum = std::make_shared<const LocalizedSpace>(rho, tol);
    auto classical = std::make_shared<const LocalizedSpace>(apply(m, rho), tol);
    switch (kind) {
    case MapKind::pullback:
        return pullback_map(m, quantum, classical);
    case MapKind::pushforward:
        return pushforward_map(m, quantum, classical);
    default:
        throw InvalidArgument("classical map kind requested for a quantum measurement");
    }
}

LocalizedLinearMap build_map(MapKind kind, const StochasticChannel& k, const ProbDist& p, const Tolerances& tol)
{
    auto input = std::make_shared<const LocalizedSpace>(p, tol);
    auto output = std::make_shared<const LocalizedSpace>(classical_apply(k, p), tol);
    switch (kind) {
    case MapKind::classical_pullback:
        return classical_pullback_map(k, input, output);
    case MapKind::classical_pushforward:
        return classical_pushforward_map(k, input, output);
    default:
        throw InvalidArgument("quantum map kind requested for a classical channel");
    }
}

// ---------------------------------------------------------------- PartialInverseMap

PartialInverseMap::PartialInverseMap(const RMatrix& source, const Tolerances& tol) : tol_(tol), source_(source)
{
    const Eigen::Index rows = source.rows();
    const Eigen::Index cols = source.cols();
    inverse_ = RMatrix::Zero(cols, rows);
    range_proj_ = RMatrix::Zero(rows, rows);
    coimage_proj_ = RMatrix::Zero(cols, cols);
    if (rows == 0 || cols == 0) {
        return;
    }
    Eigen::JacobiSVD<RMatrix> svd(source, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    const double cutoff = tol.rank_tol * s(0);
    while (rank_ < s.size() && s(rank_) > cutoff) {
        ++rank_;
    }
    singular_ = s.head(rank_);
    const RMatrix u = svd.matrixU().leftCols(rank_);
    const RMatrix v = svd.matrixV().leftCols(rank_);
    inverse_ = v * singular_.cwiseInverse().asDiagonal() * u.transpose();
    range_proj_ = u * u.transpose();
    coimage_proj_ = v * v.transpose();
}

PartialInverseMap::PartialInverseMap(const LocalizedLinearMap& source) : PartialInverseMap(source.matrix, source.tol)
{
}

double PartialInverseMap::condition_number() const
{
    return rank_ == 0 ? 1.0 : singular_(0) / singular_(rank_ - 1);
}

double PartialInverseMap::range_residual(const RVector& y) const
{
    if (y.size() != source_.rows()) {
        throw DimensionMismatch("vector does not match the codomain of the map");
    }
    const double norm = y.norm();
    if (norm == 0.0) {
        return 0.0;
    }
    return (y - range_proj_ * y).norm() / norm;
}

RVector PartialInverseMap::apply(const RVector& y) const
{
    const double r = range_residual(y);
    if (r > tol_.eq_tol) {
        throw NotInRange("vector lies outside the range of the map (relative residual " + std::to_string(r) + ")", r);
    }
    return inverse_ * y;
}

PartialInverseMap partial_inverse(const LocalizedLinearMap& map)
{
    return PartialInverseMap(map);
}

RVector apply_inverse(const PartialInverseMap& pinv, const RVector& y)
{
    return pinv.apply(y);
}

double adjoint_identity_residual(const RMatrix& a, const Tolerances& tol)
{
    const PartialInverseMap direct(a, tol);
    const PartialInverseMap of_adjoint(RMatrix(a.transpose()), tol);
    if (direct.rank() == 0) {
        return max_abs(of_adjoint.matrix());
    }
    // Forward error of a computed partial inverse is of order eps * kappa * ||A^-||.
    const double inv_norm = 1.0 / direct.singular_values()(direct.rank() - 1);
    const double kappa = direct.singular_values()(0) * inv_norm;
    return max_abs(of_adjoint.matrix() - direct.matrix().transpose()) / (std::max(1.0, kappa) * inv_norm);
}

double PartialInverseIdentities::max() const
{
    return std::max({reproduce_source, reproduce_inverse, coimage_projection, range_projection});
}

PartialInverseIdentities partial_inverse_identities(const PartialInverseMap& pinv)
{
    const RMatrix& a = pinv.source();
    const RMatrix& b = pinv.matrix();
    PartialInverseIdentities out;
    if (pinv.rank() == 0) {
        out.reproduce_source = max_abs(a);
        out.reproduce_inverse = max_abs(b);
        return out;
    }
    const double a_norm = pinv.singular_values()(0);
    const double b_norm = 1.0 / pinv.singular_values()(pinv.rank() - 1);
    const double kappa = a_norm * b_norm;
    out.reproduce_source = max_abs(a * b * a - a) / (a_norm * std::max(1.0, kappa));
    out.reproduce_inverse = max_abs(b * a * b - b) / (b_norm * std::max(1.0, kappa));
    const RMatrix ba = b * a;
    const RMatrix ab = a * b;
    out.coimage_projection = std::max(
        {max_abs(ba - pinv.coimage_projector()), max_abs(ba - ba.transpose()), max_abs(ba * ba - ba)}) /
                             std::max(1.0, kappa);
    out.range_projection =
        std::max({max_abs(ab - pinv.range_projector()), max_abs(ab - ab.transpose()), max_abs(ab * ab - ab)}) /
        std::max(1.0, kappa);
    return out;
}

} // namespace urel
