#include "urel/core.hpp"

#include <cmath>
#include <sstream>

namespace urel {

namespace {

void require_square(const CMatrix& m, const char* what)
{
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw InvalidArgument(std::string(what) + " must be a non-empty square matrix");
    }
    if (!m.allFinite()) {
        throw InvalidArgument(std::string(what) + " has non-finite entries");
    }
}

void require_same_dim(int a, int b)
{
    if (a != b) {
        throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

void require_same_size(int a, int b)
{
    if (a != b) {
        throw DimensionMismatch("outcome-set mismatch: " + std::to_string(a) + " vs " + std::to_string(b) +
                                " outcomes");
    }
}

} // namespace

// ---------------------------------------------------------------- OutcomeSpace

OutcomeSpace::OutcomeSpace(std::vector<std::string> labels_)
    : labels(std::move(labels_)), values(labels.size())
{
}

OutcomeSpace::OutcomeSpace(std::vector<std::string> labels_, std::vector<std::optional<double>> values_)
    : labels(std::move(labels_)), values(std::move(values_))
{
    if (values.size() != labels.size()) {
        throw InvalidArgument("outcome labels and values differ in length");
    }
}

OutcomeSpace OutcomeSpace::indexed(int n)
{
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i));
    }
    return OutcomeSpace(std::move(labels));
}

OutcomeSpace OutcomeSpace::numeric(const std::vector<double>& vals)
{
    std::vector<std::string> labels;
    std::vector<std::optional<double>> values;
    for (double v : vals) {
        std::ostringstream os;
        os << v;
        labels.push_back(os.str());
        values.emplace_back(v);
    }
    return OutcomeSpace(std::move(labels), std::move(values));
}

bool OutcomeSpace::has_values() const
{
    for (const auto& v : values) {
        if (!v) {
            return false;
        }
    }
    return !values.empty();
}

RVector OutcomeSpace::value_vector() const
{
    if (!has_values()) {
        throw InvalidArgument("outcome space carries no numeric values");
    }
    RVector out(size());
    for (int i = 0; i < size(); ++i) {
        out(i) = *values[i];
    }
    return out;
}

// ---------------------------------------------------------------- DensityState

DensityState::DensityState(const CMatrix& matrix, const Tolerances& tol)
{
    require_square(matrix, "density matrix");
    const double scale = std::max(1.0, matrix.norm());
    if ((matrix - matrix.adjoint()).norm() > tol.eq_tol * scale) {
        throw InvalidArgument("density matrix is not Hermitian");
    }
    CMatrix herm = (matrix + matrix.adjoint()) / 2.0;
    const double trace = herm.trace().real();
    if (std::abs(trace - 1.0) > tol.eq_tol) {
        throw InvalidArgument("density matrix trace " + std::to_string(trace) + " differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    RVector lambda = es.eigenvalues();
    if (lambda.minCoeff() < -tol.rank_tol) {
        throw InvalidArgument("density matrix has negative eigenvalue " + std::to_string(lambda.minCoeff()));
    }
    // Roundoff-level eigenvalues would otherwise leak sqrt(eps) into rho^{1/2} along the null space.
    const double floor = tol.rank_tol * std::max(lambda.maxCoeff(), 0.0);
    lambda = lambda.unaryExpr([floor](double x) { return x <= floor ? 0.0 : x; });
    lambda /= lambda.sum();
    const CMatrix& v = es.eigenvectors();
    rho_ = v * lambda.cast<cplx>().asDiagonal() * v.adjoint();
    rho_ = (rho_ + rho_.adjoint()).eval() / 2.0;
    sqrt_ = v * lambda.cwiseSqrt().cast<cplx>().asDiagonal() * v.adjoint();
    eigenvalues_ = lambda;
}

// ---------------------------------------------------------------- ProbDist

ProbDist::ProbDist(OutcomeSpace outcomes, RVector weights, const Tolerances& tol)
    : outcomes_(std::move(outcomes)), weights_(std::move(weights))
{
    if (outcomes_.size() != weights_.size()) {
        throw DimensionMismatch("distribution has " + std::to_string(weights_.size()) + " weights for " +
                                std::to_string(outcomes_.size()) + " outcomes");
    }
    if (weights_.size() == 0 || !weights_.allFinite()) {
        throw InvalidArgument("distribution weights must be finite and non-empty");
    }
    if (weights_.minCoeff() < -tol.prob_tol) {
        throw InvalidArgument("distribution has negative weight");
    }
    weights_ = weights_.cwiseMax(0.0);
    const double total = weights_.sum();
    if (std::abs(total - 1.0) > tol.eq_tol) {
        throw InvalidArgument("distribution weights sum to " + std::to_string(total));
    }
    weights_ /= total;
}

ProbDist::ProbDist(RVector weights, const Tolerances& tol)
    : ProbDist(OutcomeSpace::indexed(static_cast<int>(weights.size())), RVector(weights), tol)
{
}

// ---------------------------------------------------------------- observables

HermObservable::HermObservable(const CMatrix& matrix, double tol)
{
    require_square(matrix, "observable");
    if ((matrix - matrix.adjoint()).norm() > tol * std::max(1.0, matrix.norm())) {
        throw InvalidArgument("observable is not Hermitian");
    }
    m_ = (matrix + matrix.adjoint()) / 2.0;
}

HermObservable HermObservable::identity(int dim)
{
    return HermObservable(CMatrix::Identity(dim, dim));
}

HermObservable HermObservable::zero(int dim)
{
    return HermObservable(CMatrix::Zero(dim, dim));
}

HermObservable HermObservable::operator+(const HermObservable& o) const
{
    require_same_dim(dim(), o.dim());
    return HermObservable(CMatrix(m_ + o.m_));
}

HermObservable HermObservable::operator-(const HermObservable& o) const
{
    require_same_dim(dim(), o.dim());
    return HermObservable(CMatrix(m_ - o.m_));
}

HermObservable HermObservable::operator*(double t) const
{
    return HermObservable(CMatrix(m_ * t));
}

ClassObservable::ClassObservable(std::initializer_list<double> values) : v_(static_cast<Eigen::Index>(values.size()))
{
    Eigen::Index i = 0;
    for (double x : values) {
        v_(i++) = x;
    }
}

namespace pauli {
CMatrix identity()
{
    return CMatrix::Identity(2, 2);
}
CMatrix x()
{
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
CMatrix y()
{
    CMatrix m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
CMatrix z()
{
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
} // namespace pauli

// ---------------------------------------------------------------- Hermitian basis

RVector hermitian_coordinates(const CMatrix& a)
{
    const int d = static_cast<int>(a.rows());
    RVector x(d * d);
    int k = 0;
    for (int j = 0; j < d; ++j) {
        x(k++) = a(j, j).real();
    }
    const double s = std::sqrt(2.0);
    for (int j = 0; j < d; ++j) {
        for (int l = j + 1; l < d; ++l) {
            x(k++) = s * a(j, l).real();
            x(k++) = s * a(j, l).imag();
        }
    }
    return x;
}

CMatrix hermitian_from_coordinates(const RVector& x, int dim)
{
    if (x.size() != dim * dim) {
        throw DimensionMismatch("coordinate vector length does not match dimension");
    }
    CMatrix a = CMatrix::Zero(dim, dim);
    int k = 0;
    for (int j = 0; j < dim; ++j) {
        a(j, j) = x(k++);
    }
    const double s = std::sqrt(0.5);
    for (int j = 0; j < dim; ++j) {
        for (int l = j + 1; l < dim; ++l) {
            const double re = x(k++) * s;
            const double im = x(k++) * s;
            a(j, l) = cplx(re, im);
            a(l, j) = cplx(re, -im);
        }
    }
    return a;
}

CMatrix hermitian_basis_element(int k, int dim)
{
    RVector e = RVector::Zero(dim * dim);
    e(k) = 1.0;
    return hermitian_from_coordinates(e, dim);
}

RMatrix quantum_gram(const DensityState& rho)
{
    const int d = rho.dim();
    const int n = d * d;
    CMatrix cols(n, n);
    for (int k = 0; k < n; ++k) {
        CMatrix x = hermitian_basis_element(k, d) * rho.sqrt();
        cols.col(k) = Eigen::Map<const Eigen::VectorXcd>(x.data(), n);
    }
    RMatrix g = (cols.adjoint() * cols).real();
    return (g + g.transpose()) / 2.0;
}

// ---------------------------------------------------------------- inner products

double expectation(const HermObservable& a, const DensityState& rho)
{
    require_same_dim(a.dim(), rho.dim());
    return (a.matrix() * rho.matrix()).trace().real();
}

double expectation(const ClassObservable& f, const ProbDist& p)
{
    require_same_size(f.size(), p.size());
    return f.values().dot(p.weights());
}

double quantum_inner(const HermObservable& a, const HermObservable& b, const DensityState& rho)
{
    require_same_dim(a.dim(), rho.dim());
    require_same_dim(b.dim(), rho.dim());
    const CMatrix x = a.matrix() * rho.sqrt();
    const CMatrix y = b.matrix() * rho.sqrt();
    return (x.adjoint() * y).trace().real();
}

double commutator_expectation(const HermObservable& a, const HermObservable& b, const DensityState& rho)
{
    require_same_dim(a.dim(), rho.dim());
    require_same_dim(b.dim(), rho.dim());
    return (a.matrix() * b.matrix() * rho.matrix()).trace().imag();
}

double classical_inner(const ClassObservable& f, const ClassObservable& g, const ProbDist& p)
{
    require_same_size(f.size(), p.size());
    require_same_size(g.size(), p.size());
    return (f.values().array() * g.values().array() * p.weights().array()).sum();
}

double seminorm(const HermObservable& a, const DensityState& rho)
{
    require_same_dim(a.dim(), rho.dim());
    return (a.matrix() * rho.sqrt()).norm();
}

double seminorm(const ClassObservable& f, const ProbDist& p)
{
    require_same_size(f.size(), p.size());
    return std::sqrt((f.values().array().square() * p.weights().array()).sum());
}

double std_dev(const HermObservable& a, const DensityState& rho)
{
    const double mean = expectation(a, rho);
    const CMatrix centered = a.matrix() - mean * CMatrix::Identity(a.dim(), a.dim());
    return (centered * rho.sqrt()).norm();
}

double std_dev(const ClassObservable& f, const ProbDist& p)
{
    const double mean = expectation(f, p);
    return std::sqrt(((f.values().array() - mean).square() * p.weights().array()).sum());
}

bool equivalent(const HermObservable& a, const HermObservable& b, const DensityState& rho, const Tolerances& tol)
{
    return seminorm(a - b, rho) <= tol.eq_tol;
}

bool equivalent(const ClassObservable& f, const ClassObservable& g, const ProbDist& p, const Tolerances& tol)
{
    require_same_size(f.size(), g.size());
    return seminorm(f - g, p) <= tol.eq_tol;
}

// ---------------------------------------------------------------- LocalizedSpace

LocalizedSpace::LocalizedSpace(const DensityState& rho, const Tolerances& tol)
    : kind_(SpaceKind::quantum), base_dim_(rho.dim()), tol_(tol), state_(rho)
{
    tol.validate();
    const RMatrix g = quantum_gram(rho);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(g);
    const RVector& lambda = es.eigenvalues();
    const double cutoff = tol.rank_tol * lambda.maxCoeff();
    std::vector<int> kept;
    for (int i = static_cast<int>(lambda.size()) - 1; i >= 0; --i) {
        if (lambda(i) > cutoff) {
            kept.push_back(i);
        }
    }
    const int n = static_cast<int>(g.rows());
    const int r = static_cast<int>(kept.size());
    chart_.resize(r, n);
    lift_.resize(n, r);
    spectrum_.resize(r);
    for (int k = 0; k < r; ++k) {
        const double l = lambda(kept[k]);
        RVector v = es.eigenvectors().col(kept[k]);
        // Fix the sign so that the basis is reproducible across platforms.
        Eigen::Index at = 0;
        v.cwiseAbs().maxCoeff(&at);
        if (v(at) < 0) {
            v = -v;
        }
        chart_.row(k) = std::sqrt(l) * v.transpose();
        lift_.col(k) = v / std::sqrt(l);
        spectrum_(k) = l;
    }
}

LocalizedSpace::LocalizedSpace(const ProbDist& p, const Tolerances& tol)
    : kind_(SpaceKind::classical), base_dim_(p.size()), tol_(tol), dist_(p)
{
    tol.validate();
    for (int i = 0; i < p.size(); ++i) {
        if (p(i) > tol.prob_tol) {
            support_.push_back(i);
        }
    }
    const int r = static_cast<int>(support_.size());
    chart_ = RMatrix::Zero(r, p.size());
    lift_ = RMatrix::Zero(p.size(), r);
    spectrum_.resize(r);
    for (int k = 0; k < r; ++k) {
        const double w = p(support_[k]);
        chart_(k, support_[k]) = std::sqrt(w);
        lift_(support_[k], k) = 1.0 / std::sqrt(w);
        spectrum_(k) = w;
    }
}

RVector LocalizedSpace::coords(const HermObservable& a) const
{
    if (kind_ != SpaceKind::quantum) {
        throw InvalidArgument("quantum observable given to a classical localized space");
    }
    require_same_dim(a.dim(), base_dim_);
    return chart_ * hermitian_coordinates(a.matrix());
}

RVector LocalizedSpace::coords(const ClassObservable& f) const
{
    if (kind_ != SpaceKind::classical) {
        throw InvalidArgument("classical observable given to a quantum localized space");
    }
    require_same_size(f.size(), base_dim_);
    return chart_ * f.values();
}

HermObservable LocalizedSpace::quantum_representative(const RVector& c) const
{
    if (kind_ != SpaceKind::quantum) {
        throw InvalidArgument("classical localized space has no quantum representatives");
    }
    require_same_size(static_cast<int>(c.size()), rank());
    return HermObservable(hermitian_from_coordinates(lift_ * c, base_dim_));
}

ClassObservable LocalizedSpace::classical_representative(const RVector& c) const
{
    if (kind_ != SpaceKind::classical) {
        throw InvalidArgument("quantum localized space has no classical representatives");
    }
    require_same_size(static_cast<int>(c.size()), rank());
    return ClassObservable(RVector(lift_ * c));
}

HermObservable LocalizedSpace::quantum_basis(int k) const
{
    return quantum_representative(RVector::Unit(rank(), k));
}

ClassObservable LocalizedSpace::classical_basis(int k) const
{
    return classical_representative(RVector::Unit(rank(), k));
}

LocalizedSpace build_localized_space(const DensityState& rho, const Tolerances& tol)
{
    return LocalizedSpace(rho, tol);
}

LocalizedSpace build_localized_space(const ProbDist& p, const Tolerances& tol)
{
    return LocalizedSpace(p, tol);
}

} // namespace urel
