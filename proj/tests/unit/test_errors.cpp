#include "support.hpp"

#include "urel/errors.hpp"

using namespace urel;
using namespace fixtures;

TEST_CASE("gauge fixtures")
{
    const DensityState rho = maximally_mixed();
    oracle::Rng rng(8);
    for (int i = 0; i < 10; ++i) {
        const HermObservable a = oracle::random_observable(rng, 3);
        const Povm m = projective_measurement_of(a);
        CHECK(gauge(a, ClassObservable(m.outcomes().value_vector()), m, oracle::random_state(rng, 3, 3)) < 1e-7);
    }
    const Povm trivial = trivial_measurement(ProbDist(RVector::Constant(2, 0.5)), 2);
    CHECK(gauge(sz(), ClassObservable{0, 0}, trivial, rho) == doctest::Approx(1.0));
    CHECK(gauge(sz(), ClassObservable{2, -2}, noisy_z(0.5), rho) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("gauge agrees with the raw-trace formula")
{
    for (int i = 0; i < 200; ++i) {
        const oracle::RandomInstance inst = oracle::random_instance(spec_for(61, i));
        const double sum_of_squares = gauge(inst.a, inst.f, inst.first, inst.rho);
        const double raw = oracle::raw_gauge_sq(inst.a, inst.f, inst.first, inst.rho);
        CHECK(std::abs(sum_of_squares * sum_of_squares - raw) <= 1e-9 * std::max(1.0, std::abs(raw)));
    }
}

TEST_CASE("error fixtures")
{
    oracle::Rng rng(9);
    for (int i = 0; i < 10; ++i) {
        const int d = 2 + i % 3;
        const HermObservable a = oracle::random_observable(rng, d);
        const DensityState rho = oracle::random_state(rng, d, 1 + i % d);
        CHECK(error(a, projective_measurement_of(a), rho).value < 1e-7);
        const Povm trivial = trivial_measurement(oracle::random_distribution(rng, 3), d);
        CHECK(std::abs(error(a, trivial, rho).value - std_dev(a, rho)) < 1e-9);
    }
    CHECK(error(sx(), sz_projective(), maximally_mixed()).value == doctest::Approx(1.0));
    CHECK(error(sz(), noisy_z(0.5), maximally_mixed()).value == doctest::Approx(std::sqrt(3.0) / 2));
}

TEST_CASE("representability fixtures")
{
    oracle::Rng rng(10);
    const DensityState rho = maximally_mixed();
    for (int i = 0; i < 5; ++i) {
        const Povm m = oracle::random_povm(rng, 3, 1 + i);
        CHECK(is_representable(HermObservable::identity(3), m, oracle::random_state(rng, 3, 2)).representable);
    }
    const Representability x = is_representable(sx(), sz_projective(), rho);
    CHECK_FALSE(x.representable);
    CHECK(x.residual == doctest::Approx(1.0));
    const Representability z = is_representable(sz(), noisy_z(0.5), rho);
    CHECK(z.representable);
    REQUIRE(z.representative.has_value());
    CHECK((z.representative->values() - RVector((RVector(2) << 2, -2).finished())).norm() < 1e-12);
}

TEST_CASE("representability error fixtures")
{
    const DensityState rho = maximally_mixed();
    CHECK(error_repr(sz(), sz_projective(), rho).value < 1e-12);
    CHECK(error_repr(sz(), noisy_z(0.5), rho).value == doctest::Approx(std::sqrt(3.0)));
    const ErrorValue inf = error_repr(sx(), sz_projective(), rho);
    CHECK_FALSE(inf.finite);
    CHECK(std::isinf(inf.value));

    for (double eta : {0.2, 0.5, 0.9}) {
        const LocalizedMeasurement lm(noisy_z(eta), rho);
        CHECK(std::abs(error(sz(), lm).value - std::sqrt(1 - eta * eta)) < 1e-12);
        CHECK(std::abs(error_repr(sz(), lm).value - std::sqrt(1 / (eta * eta) - 1)) < 1e-12);
    }
}

TEST_CASE("near-range observables are flagged ill-conditioned")
{
    const DensityState rho = maximally_mixed();
    // sigma_z plus a component orthogonal to the range of size between eq_tol and 100 eq_tol.
    const HermObservable a = sz() + sx() * 2e-7;
    const ErrorValue e = error_repr(a, sz_projective(), rho);
    CHECK(e.ill_conditioned);
    CHECK_FALSE(e.finite);
    CHECK(e.range_residual > 1e-8);
    CHECK(e.range_residual <= 1e-6);
    CHECK_FALSE(error_repr(sz() + sx() * 1e-4, sz_projective(), rho).ill_conditioned);
}

TEST_CASE("two-errors identity")
{
    const LocalizedMeasurement lm(noisy_z(0.5), maximally_mixed());
    const TwoErrorsReport r = two_errors_identity(sz(), lm);
    CHECK(r.error_repr_sq - r.error_sq == doctest::Approx(2.25));
    CHECK(r.gap_sq == doctest::Approx(2.25));
    CHECK(r.residual < 1e-12);

    const LocalizedMeasurement proj(sz_projective(), maximally_mixed());
    const TwoErrorsReport zero = two_errors_identity(sz(), proj);
    CHECK(zero.error_sq < 1e-20);
    CHECK(zero.error_repr_sq < 1e-20);
    CHECK(zero.gap_sq < 1e-20);
    CHECK_THROWS_AS(two_errors_identity(sx(), proj), NotRepresentable);

    for (int i = 0; i < 200; ++i) {
        const oracle::RandomInstance inst = oracle::random_instance(spec_for(71, i));
        const LocalizedMeasurement rlm(inst.first, inst.rho);
        CHECK(two_errors_identity(inst.a_repr, rlm).residual <= 1e-9);
    }
}

TEST_CASE("decomposition fixtures")
{
    const LocalizedMeasurement lm(noisy_z(0.5), maximally_mixed());
    const DecompositionReport push = decompositions(sz(), lm.push(sz()), lm);
    CHECK(std::abs(push.gauge_sq - push.error_sq) < 1e-12);
    CHECK(push.suboptimality_sq < 1e-20);

    const ClassObservable rep{2, -2};
    const DecompositionReport opt = decompositions(sz(), rep, lm);
    REQUIRE(opt.constrained.has_value());
    CHECK(std::abs(opt.gauge_sq - opt.constrained->error_repr_sq) < 1e-12);
    CHECK(opt.constrained->suboptimality_sq < 1e-20);
    CHECK(opt.constrained->variance == doctest::Approx(4.0));
    CHECK(opt.constrained->std_dev_sq == doctest::Approx(1.0));
    CHECK(opt.constrained->variance_bound_slack == doctest::Approx(0.0));
    CHECK(opt.max_residual() < 1e-12);

    CHECK_THROWS_AS(constrained_decomposition(sz(), ClassObservable{1, -1}, lm), ConstraintViolated);
    CHECK_FALSE(decompositions(sz(), ClassObservable{1, -1}, lm).constrained.has_value());
}

TEST_CASE("decompositions on random instances")
{
    oracle::Rng rng(72);
    for (int i = 0; i < 200; ++i) {
        const oracle::RandomInstance inst = oracle::random_instance(spec_for(72, i));
        const LocalizedMeasurement lm(inst.first, inst.rho);
        const DecompositionReport any = decompositions(inst.a, inst.f, lm);
        CHECK(any.max_residual() <= 1e-9);

        // A suboptimal representative: the optimal one plus a kernel element of the pullback.
        const ClassObservable opt = lm.represent(inst.a_repr).value();
        const LocalizedSpace& cs = lm.classical_space();
        const RVector kernel_coords =
            (RMatrix::Identity(cs.rank(), cs.rank()) - lm.pullback_inverse().coimage_projector()) *
            RVector::NullaryExpr(cs.rank(), [&] { return std::normal_distribution<double>()(rng); });
        const ClassObservable shifted = opt + cs.classical_representative(kernel_coords);
        const DecompositionReport sub = decompositions(inst.a_repr, shifted, lm);
        REQUIRE(sub.constrained.has_value());
        CHECK(sub.max_residual() <= 1e-9);
        CHECK(sub.constrained->variance_bound_slack >= -1e-9);
        CHECK(sub.constrained->suboptimality_sq >= -1e-12);
    }
}

TEST_CASE("errorless conditions")
{
    oracle::Rng rng(12);
    for (int i = 0; i < 20; ++i) {
        const int d = 2 + i % 4;
        const HermObservable a = oracle::random_observable(rng, d);
        const ErrorlessVerdict v = errorless_conditions(a, projective_measurement_of(a),
                                                        oracle::random_state(rng, d, 1 + i % d));
        CHECK(v.a);
        CHECK(v.b);
        CHECK(v.c);
        CHECK(v.d);
        CHECK(v.e);
        CHECK(v.consistent);
    }
    const ErrorlessVerdict trivial =
        errorless_conditions(sz(), trivial_measurement(ProbDist(RVector::Constant(2, 0.5)), 2), maximally_mixed());
    CHECK_FALSE((trivial.a || trivial.b || trivial.c || trivial.d || trivial.e));
    CHECK(trivial.consistent);
    const ErrorlessVerdict noisy = errorless_conditions(sz(), noisy_z(0.5), maximally_mixed());
    CHECK_FALSE((noisy.a || noisy.b || noisy.c || noisy.d || noisy.e));
    CHECK(noisy.consistent);

    for (int i = 0; i < 200; ++i) {
        const oracle::RandomInstance inst = oracle::random_instance(spec_for(73, i));
        const LocalizedMeasurement lm(inst.first, inst.rho);
        CHECK(errorless_conditions(inst.a, lm).consistent);
        CHECK(errorless_conditions(inst.a_repr, lm).consistent);
    }
}

TEST_CASE("seminorm laws and ordering of the two errors")
{
    oracle::Rng rng(14);
    for (int i = 0; i < 200; ++i) {
        const oracle::RandomInstance inst = oracle::random_instance(spec_for(74, i));
        const LocalizedMeasurement lm(inst.first, inst.rho);
        const double t = std::normal_distribution<double>(0, 3)(rng);
        const double ea = error(inst.a, lm).value;
        const double eb = error(inst.b, lm).value;
        CHECK(std::abs(error(inst.a * t, lm).value - std::abs(t) * ea) <= 1e-9 * std::max(1.0, std::abs(t) * ea));
        CHECK(ea + eb - error(inst.a + inst.b, lm).value >= -1e-9);
        CHECK(ea >= 0.0);
        CHECK(std_dev(inst.a, inst.rho) - ea >= -1e-9);

        const ErrorValue ra = error_repr(inst.a_repr, lm);
        REQUIRE(ra.finite);
        CHECK(ra.value - error(inst.a_repr, lm).value >= -1e-9);
        CHECK(std::abs(error_repr(inst.a_repr * t, lm).value - std::abs(t) * ra.value) <=
              1e-9 * std::max(1.0, std::abs(t) * ra.value));

        // b_repr is a second-factor pullback; a representative through the first factor exists
        // only when the combination happens to be in range, so subadditivity uses the first factor twice.
        const HermObservable other = adjoint_apply(inst.first, oracle::random_function(rng, inst.first.size()));
        const ErrorValue rb = error_repr(other, lm);
        const ErrorValue rsum = error_repr(inst.a_repr + other, lm);
        REQUIRE(rb.finite);
        REQUIRE(rsum.finite);
        CHECK(ra.value + rb.value - rsum.value >= -1e-9);
    }
}

TEST_CASE("representability error is lower semicontinuous along convergent sequences")
{
    oracle::Rng rng(15);
    for (int i = 0; i < 50; ++i) {
        const oracle::RandomInstance inst = oracle::random_instance(spec_for(75, i));
        const LocalizedMeasurement lm(inst.first, inst.rho);
        const double limit = error_repr(inst.a_repr, lm).value;
        double liminf = ErrorValue::infinity();
        const ClassObservable step = oracle::random_function(rng, inst.first.size());
        for (int n = 1; n <= 11; ++n) {
            const HermObservable an = inst.a_repr + adjoint_apply(inst.first, step) * std::pow(0.1, n);
            const ErrorValue e = error_repr(an, lm);
            REQUIRE(e.finite);
            if (n >= 8) liminf = std::min(liminf, e.value);
        }
        CHECK(liminf >= limit - 1e-6);
    }
}

TEST_CASE("classical errors")
{
    const ProbDist half(RVector::Constant(2, 0.5));
    const LocalizedChannel bsc(StochasticChannel::binary_symmetric(0.25), half);
    CHECK(classical_error(ClassObservable{1, -1}, bsc).value == doctest::Approx(std::sqrt(3.0) / 2));
    CHECK(classical_error_repr(ClassObservable{1, -1}, bsc).value == doctest::Approx(std::sqrt(3.0)));
    const auto rep = bsc.represent(ClassObservable{1, -1});
    REQUIRE(rep.has_value());
    CHECK((rep->values() - RVector((RVector(2) << 2, -2).finished())).norm() < 1e-12);

    const LocalizedChannel id(StochasticChannel::identity(2), half);
    CHECK(classical_error(ClassObservable{1, -1}, id).value < 1e-12);
    CHECK(classical_error_repr(ClassObservable{1, -1}, id).value < 1e-12);

    const LocalizedChannel trivial(StochasticChannel::constant(half, 2), ProbDist(RVector((RVector(2) << 0.3, 0.7).finished())));
    const ClassObservable a{1, -1};
    CHECK(classical_error(a, trivial).value == doctest::Approx(std_dev(a, trivial.input())));
    CHECK_FALSE(classical_error_repr(a, trivial).finite);
}
