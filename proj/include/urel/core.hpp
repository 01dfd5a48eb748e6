#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "urel/exceptions.hpp"
#include "urel/tolerances.hpp"

namespace urel {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Labels of a finite sample space, each optionally carrying a real value.
struct OutcomeSpace {
    std::vector<std::string> labels;
    std::vector<std::optional<double>> values;

    OutcomeSpace() = default;
    explicit OutcomeSpace(std::vector<std::string> labels_);
    OutcomeSpace(std::vector<std::string> labels_, std::vector<std::optional<double>> values_);

    /// Labels "0", "1", ... without values.
    static OutcomeSpace indexed(int n);
    /// Labels printed from the values, values attached.
    static OutcomeSpace numeric(const std::vector<double>& values);

    int size() const { return static_cast<int>(labels.size()); }
    bool has_values() const;
    RVector value_vector() const;

    friend bool operator==(const OutcomeSpace&, const OutcomeSpace&) = default;
};

/// Hermitian positive-semidefinite unit-trace matrix.
///
/// Eigenvalues in [-rank_tol, rank_tol * lambda_max] are set to zero and the matrix renormalized;
/// anything more negative is rejected. The square root is cached because every
/// seminorm ||X||_rho is evaluated as the Frobenius norm of X rho^{1/2}.
class DensityState {
public:
    explicit DensityState(const CMatrix& matrix, const Tolerances& tol = {});

    int dim() const { return static_cast<int>(rho_.rows()); }
    const CMatrix& matrix() const { return rho_; }
    const CMatrix& sqrt() const { return sqrt_; }
    const RVector& eigenvalues() const { return eigenvalues_; }

private:
    CMatrix rho_;
    CMatrix sqrt_;
    RVector eigenvalues_;
};

/// Probability distribution over an outcome space.
class ProbDist {
public:
    ProbDist(OutcomeSpace outcomes, RVector weights, const Tolerances& tol = {});
    explicit ProbDist(RVector weights, const Tolerances& tol = {});

    int size() const { return static_cast<int>(weights_.size()); }
    const OutcomeSpace& outcomes() const { return outcomes_; }
    const RVector& weights() const { return weights_; }
    double operator()(int i) const { return weights_(i); }

private:
    OutcomeSpace outcomes_;
    RVector weights_;
};

/// Self-adjoint operator. The stored matrix is exactly Hermitian (symmetrized on input).
class HermObservable {
public:
    HermObservable() = default;
    explicit HermObservable(const CMatrix& matrix, double tol = 1e-8);

    static HermObservable identity(int dim);
    static HermObservable zero(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMatrix& matrix() const { return m_; }

    HermObservable operator+(const HermObservable& o) const;
    HermObservable operator-(const HermObservable& o) const;
    HermObservable operator*(double t) const;
    friend HermObservable operator*(double t, const HermObservable& a) { return a * t; }

private:
    CMatrix m_;
};

/// Real function on a finite sample space, indexed by outcome position.
class ClassObservable {
public:
    ClassObservable() = default;
    explicit ClassObservable(RVector values) : v_(std::move(values)) {}
    ClassObservable(std::initializer_list<double> values);

    static ClassObservable constant(int n, double c) { return ClassObservable(RVector::Constant(n, c)); }

    int size() const { return static_cast<int>(v_.size()); }
    const RVector& values() const { return v_; }
    double operator()(int i) const { return v_(i); }

    ClassObservable operator+(const ClassObservable& o) const { return ClassObservable(RVector(v_ + o.v_)); }
    ClassObservable operator-(const ClassObservable& o) const { return ClassObservable(RVector(v_ - o.v_)); }
    ClassObservable operator*(double t) const { return ClassObservable(RVector(v_ * t)); }

private:
    RVector v_;
};

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
} // namespace pauli

/// Coordinates of a Hermitian matrix in the Hilbert–Schmidt orthonormal basis
/// {E_jj, (E_jk + E_kj)/sqrt2, i(E_jk - E_kj)/sqrt2 : j < k}.
RVector hermitian_coordinates(const CMatrix& a);
CMatrix hermitian_from_coordinates(const RVector& x, int dim);
/// k-th element of the basis above.
CMatrix hermitian_basis_element(int k, int dim);

double expectation(const HermObservable& a, const DensityState& rho);
double expectation(const ClassObservable& f, const ProbDist& p);

/// <A,B>_rho = Tr[{A,B} rho] / 2.
double quantum_inner(const HermObservable& a, const HermObservable& b, const DensityState& rho);
/// <[A,B] / 2i>_rho.
double commutator_expectation(const HermObservable& a, const HermObservable& b, const DensityState& rho);
double classical_inner(const ClassObservable& f, const ClassObservable& g, const ProbDist& p);

double seminorm(const HermObservable& a, const DensityState& rho);
double seminorm(const ClassObservable& f, const ProbDist& p);

double std_dev(const HermObservable& a, const DensityState& rho);
double std_dev(const ClassObservable& f, const ProbDist& p);

bool equivalent(const HermObservable& a, const HermObservable& b, const DensityState& rho,
                const Tolerances& tol = {});
bool equivalent(const ClassObservable& f, const ClassObservable& g, const ProbDist& p,
                const Tolerances& tol = {});

enum class SpaceKind { quantum, classical };

/// Quotient of observables by the null space of an anchor seminorm, realized as
/// an orthonormal chart.
///
/// Ambient coordinates are Hermitian-basis coordinates (quantum, length d^2) or the
/// outcome values themselves (classical). chart() maps ambient coordinates to
/// quotient coordinates; lift() maps quotient coordinates back to a canonical
/// representative, and chart() * lift() is the identity.
class LocalizedSpace {
public:
    LocalizedSpace(const DensityState& rho, const Tolerances& tol = {});
    LocalizedSpace(const ProbDist& p, const Tolerances& tol = {});

    SpaceKind kind() const { return kind_; }
    int rank() const { return static_cast<int>(chart_.rows()); }
    int ambient_dim() const { return static_cast<int>(chart_.cols()); }
    /// Hilbert-space dimension (quantum) or number of outcomes (classical).
    int base_dim() const { return base_dim_; }
    const Tolerances& tol() const { return tol_; }

    const RMatrix& chart() const { return chart_; }
    const RMatrix& lift() const { return lift_; }
    /// Eigenvalues of the seminorm Gram form that were retained.
    const RVector& retained_spectrum() const { return spectrum_; }
    /// Outcomes with weight above prob_tol; empty for quantum spaces.
    const std::vector<int>& support() const { return support_; }

    const std::optional<DensityState>& state() const { return state_; }
    const std::optional<ProbDist>& distribution() const { return dist_; }

    RVector coords(const HermObservable& a) const;
    RVector coords(const ClassObservable& f) const;
    HermObservable quantum_representative(const RVector& c) const;
    ClassObservable classical_representative(const RVector& c) const;
    HermObservable quantum_basis(int k) const;
    ClassObservable classical_basis(int k) const;

private:
    SpaceKind kind_;
    int base_dim_;
    Tolerances tol_;
    RMatrix chart_;
    RMatrix lift_;
    RVector spectrum_;
    std::vector<int> support_;
    std::optional<DensityState> state_;
    std::optional<ProbDist> dist_;
};

LocalizedSpace build_localized_space(const DensityState& rho, const Tolerances& tol = {});
LocalizedSpace build_localized_space(const ProbDist& p, const Tolerances& tol = {});

/// Real Gram matrix G_ab = <B_a, B_b>_rho over the Hermitian basis.
RMatrix quantum_gram(const DensityState& rho);

} // namespace urel
