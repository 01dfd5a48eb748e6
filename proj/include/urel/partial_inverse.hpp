#pragma once

#include <memory>

#include "urel/core.hpp"
#include "urel/measurement.hpp"

namespace urel {

using SpacePtr = std::shared_ptr<const LocalizedSpace>;

/// Linear map between localized spaces, written in their orthonormal quotient coordinates.
struct LocalizedLinearMap {
    SpacePtr domain;
    SpacePtr codomain;
    /// codomain.rank() x domain.rank()
    RMatrix matrix;
    Tolerances tol;

    LocalizedLinearMap(SpacePtr domain_, SpacePtr codomain_, RMatrix matrix_, const Tolerances& tol_ = {});

    RVector apply(const RVector& x) const { return matrix * x; }
    /// Metric adjoint; in orthonormal coordinates this is the transpose.
    LocalizedLinearMap adjoint() const { return LocalizedLinearMap(codomain, domain, matrix.transpose(), tol); }
};

enum class MapKind { pullback, pushforward, classical_pullback, classical_pushforward };

/// Pullback of M over rho, from the classical space over M(rho) to the quantum space over rho.
LocalizedLinearMap pullback_map(const Povm& m, SpacePtr quantum, SpacePtr classical);
/// Pushforward of M over rho, built column by column from the Radon–Nikodym quotient.
LocalizedLinearMap pushforward_map(const Povm& m, SpacePtr quantum, SpacePtr classical);
/// Pullback of K over p: from the space over K(p) to the space over p.
LocalizedLinearMap classical_pullback_map(const StochasticChannel& k, SpacePtr input, SpacePtr output);
LocalizedLinearMap classical_pushforward_map(const StochasticChannel& k, SpacePtr input, SpacePtr output);

LocalizedLinearMap build_map(MapKind kind, const Povm& m, const DensityState& rho, const Tolerances& tol = {});
LocalizedLinearMap build_map(MapKind kind, const StochasticChannel& k, const ProbDist& p,
                             const Tolerances& tol = {});

/// Standard partial inverse of a coordinate matrix: the inverse of its restriction to ker^perp.
class PartialInverseMap {
public:
    PartialInverseMap(const RMatrix& source, const Tolerances& tol = {});
    explicit PartialInverseMap(const LocalizedLinearMap& source);

    const RMatrix& source() const { return source_; }
    /// domain-rank x codomain-rank
    const RMatrix& matrix() const { return inverse_; }
    const RMatrix& range_projector() const { return range_proj_; }
    const RMatrix& coimage_projector() const { return coimage_proj_; }
    const RVector& singular_values() const { return singular_; }
    int rank() const { return rank_; }
    /// Ratio of largest to smallest retained singular value (1 for the zero map).
    double condition_number() const;
    const Tolerances& tol() const { return tol_; }

    /// ||y - P y|| / ||y|| with P the range projector; 0 for y = 0.
    double range_residual(const RVector& y) const;
    bool in_range(const RVector& y) const { return range_residual(y) <= tol_.eq_tol; }
    /// Throws NotInRange when y is outside the range.
    RVector apply(const RVector& y) const;
    /// Applies the inverse matrix without the range check.
    RVector apply_unchecked(const RVector& y) const { return inverse_ * y; }

private:
    Tolerances tol_;
    RMatrix source_;
    RMatrix inverse_;
    RMatrix range_proj_;
    RMatrix coimage_proj_;
    RVector singular_;
    int rank_ = 0;
};

PartialInverseMap partial_inverse(const LocalizedLinearMap& map);
RVector apply_inverse(const PartialInverseMap& pinv, const RVector& y);

/// Max-abs entry of (A^*)^- - (A^-)^*, divided by kappa(A) ||A^-|| (the size of roundoff in either inverse).
double adjoint_identity_residual(const RMatrix& a, const Tolerances& tol = {});

/// Residuals of A A^- A = A, A^- A A^- = A^-, and symmetry/idempotence of A^- A and A A^-.
/// Normwise residuals of the defining identities. A A^- A - A is divided by kappa ||A||, A^- A A^- - A^-
/// by kappa ||A^-||, and the projector identities by kappa, so roundoff reads as O(eps) at any conditioning.
struct PartialInverseIdentities {
    double reproduce_source = 0;
    double reproduce_inverse = 0;
    double coimage_projection = 0;
    double range_projection = 0;
    double max() const;
};
PartialInverseIdentities partial_inverse_identities(const PartialInverseMap& pinv);

} // namespace urel
