#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "urel/errors.hpp"
#include "urel/joint.hpp"

namespace urel {

/// Terms entering the lower bounds. Each is present only where the relation uses it.
struct BoundComponents {
    std::optional<double> R;
    std::optional<double> I;
    std::optional<double> R_tilde;
    std::optional<double> I0;
    std::optional<double> R0;
};

enum class Verdict { holds, violated, inapplicable };

const char* to_string(Verdict v);

struct RelationReport {
    std::string id;
    double lhs = 0;
    double bound = 0;
    double slack = 0;
    BoundComponents components;
    Verdict verdict = Verdict::inapplicable;
    /// Failed precondition for inapplicable reports; free text otherwise.
    std::string note;
    std::map<std::string, double> diagnostics;

    bool holds() const { return verdict == Verdict::holds; }
};

/// lhs >= bound, judged with ineq_tol.
RelationReport make_report(std::string id, double lhs, double bound, BoundComponents components,
                           const Tolerances& tol);
RelationReport inapplicable_report(std::string id, std::string reason);

/// eps(A;M) eps(B;M) >= sqrt(R^2 + I^2). The |I|-only form is in diagnostics
/// "simplified_bound" / "simplified_slack".
RelationReport relation_error(const HermObservable& a, const HermObservable& b, const LocalizedMeasurement& lm);
RelationReport relation_error(const HermObservable& a, const HermObservable& b, const Povm& m,
                              const DensityState& rho, const Tolerances& tol = {});

/// eps~(A;M) eps~(B;M) >= sqrt(R~^2 + I0^2); inapplicable unless both are representable.
RelationReport relation_error_repr(const HermObservable& a, const HermObservable& b, const LocalizedMeasurement& lm);
RelationReport relation_error_repr(const HermObservable& a, const HermObservable& b, const Povm& m,
                                   const DensityState& rho, const Tolerances& tol = {});

/// sigma(f) sigma(g) >= sqrt((|R~| + |R0|)^2 + 4 I0^2) for representatives f of A and g of B.
/// Throws ConstraintViolated. Diagnostics carry the same relation at the optimal representatives.
RelationReport relation_representatives(const HermObservable& a, const HermObservable& b, const ClassObservable& f,
                                        const ClassObservable& g, const LocalizedMeasurement& lm);

/// Everything the joint relations share: both factor measurements localized over
/// the same state, the mediating joint measurement and its certificate.
class JointSetting {
public:
    JointSetting(Povm m, Povm n, JointPovm j, const DensityState& rho, const Tolerances& tol = {});

    const LocalizedMeasurement& first() const { return first_; }
    const LocalizedMeasurement& second() const { return second_; }
    const JointPovm& joint() const { return joint_; }
    const ProbDist& joint_distribution() const { return joint_dist_; }
    const JointDescriptionCertificate& certificate() const { return cert_; }
    const DensityState& state() const { return first_.state(); }
    const Tolerances& tol() const { return first_.tol(); }

    /// <pi_1^* f, pi_2^* g> over J rho.
    double cross_inner(const ClassObservable& f, const ClassObservable& g) const;

private:
    LocalizedMeasurement first_;
    LocalizedMeasurement second_;
    JointPovm joint_;
    ProbDist joint_dist_;
    JointDescriptionCertificate cert_;
};

RelationReport relation_joint_error(const HermObservable& a, const HermObservable& b, const JointSetting& js);
RelationReport relation_joint_repr(const HermObservable& a, const HermObservable& b, const JointSetting& js);
/// gauge(A,f;M) gauge(B,g;N) >= sqrt(R^2 + I^2) with
///   R = <A,B> - <N_* A, g>_{N rho} - <f, M_* B>_{M rho} + <f, g>_{J rho},
///   I = I0 - <[M'f, B]/2i> - <[A, N'g]/2i>.
RelationReport relation_gauge(const HermObservable& a, const HermObservable& b, const ClassObservable& f,
                              const ClassObservable& g, const JointSetting& js);
/// Throws ConstraintViolated.
RelationReport relation_representatives_joint(const HermObservable& a, const HermObservable& b,
                                              const ClassObservable& f, const ClassObservable& g,
                                              const JointSetting& js);

/// Classical error, representability-error and representative relations for a channel.
/// Missing representatives default to the partial-inverse ones.
std::vector<RelationReport> classical_relations(const ClassObservable& a, const ClassObservable& b,
                                                const std::optional<ClassObservable>& f,
                                                const std::optional<ClassObservable>& g, const LocalizedChannel& lk);

/// Schrödinger relation followed by the Kennard–Robertson relation.
std::vector<RelationReport> schrodinger_and_kr(const HermObservable& a, const HermObservable& b,
                                               const DensityState& rho, const Tolerances& tol = {});

struct ChainReport {
    std::string id;
    std::vector<RelationReport> links;
    Verdict verdict = Verdict::inapplicable;
    std::string note;
};

/// Links compare the value-based errors of the marginals of J (see value_error) with the
/// joint relations. Inapplicable when either factor lacks numeric outcome values.
ChainReport ozawa_chain(const HermObservable& a, const HermObservable& b, const JointPovm& j,
                        const DensityState& rho, const Tolerances& tol = {});
/// Error chain, then standard-deviation chain.
std::vector<ChainReport> akg_chains(const HermObservable& a, const HermObservable& b, const JointPovm& j,
                                    const DensityState& rho, const Tolerances& tol = {});

struct NogoCandidate {
    Povm first;
    Povm second;
    JointPovm joint;
};

struct NogoReport {
    Verdict verdict = Verdict::inapplicable;
    std::string note;
    /// |<[A,B]/2i>|: the bound the product of errors would violate if both vanished.
    double commutator_margin = 0;
    /// Positive root of m^2 + (sigma(A) + sigma(B)) m = |<[A,B]/2i>|, a floor for max(eps(A), eps(B)).
    double guaranteed_margin = 0;
    int candidates = 0;
    int certified = 0;
    /// Smallest max(eps(A;M), eps(B;N)) over certified candidates (+inf when none).
    double min_max_error = 0;
    bool errorless_found = false;
};

NogoReport nogo_check(const HermObservable& a, const HermObservable& b, const DensityState& rho,
                      const std::vector<NogoCandidate>& candidates, const Tolerances& tol = {});

} // namespace urel
