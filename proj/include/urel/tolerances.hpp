#pragma once

#include <stdexcept>

namespace urel {

/// Numerical thresholds shared by every module.
///
/// rank_tol  relative cutoff for Gram eigenvalues and singular values
/// eq_tol    threshold under which a seminorm (or range residual) counts as zero
/// prob_tol  outcome probabilities at or below this are treated as unsupported
/// ineq_tol  negative slack an inequality may show and still be reported as holding
struct Tolerances {
    double rank_tol = 1e-10;
    double eq_tol = 1e-8;
    double prob_tol = 1e-12;
    double ineq_tol = 1e-9;

    void validate() const
    {
        if (!(rank_tol > 0) || !(eq_tol > 0) || !(prob_tol > 0) || !(ineq_tol > 0)) {
            throw std::invalid_argument("tolerances must be strictly positive");
        }
    }

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

} // namespace urel
