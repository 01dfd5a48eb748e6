#include "urel/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace urel::oracle {

namespace {

constexpr int kSampleShards = 16;

CMatrix gaussian_matrix(Rng& rng, int rows, int cols)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix g(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = cplx(re, im) / std::sqrt(2.0);
        }
    }
    return g;
}

CMatrix inverse_sqrt_psd(const CMatrix& s)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
    const RVector inv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * inv.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double trace_re(const CMatrix& m)
{
    return m.trace().real();
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

DensityState random_state(Rng& rng, int dim, int rank)
{
    const CMatrix g = gaussian_matrix(rng, dim, rank);
    CMatrix w = g * g.adjoint();
    w /= trace_re(w);
    return DensityState(CMatrix((w + w.adjoint()) / 2.0));
}

Povm random_povm(Rng& rng, int dim, int n_outcomes)
{
    std::uniform_int_distribution<int> rank_dist(1, dim);
    std::vector<CMatrix> xs;
    int total_rank = 0;
    for (int i = 0; i < n_outcomes; ++i) {
        int k = rank_dist(rng);
        if (i == n_outcomes - 1 && total_rank + k < dim) {
            k = dim;
        }
        total_rank += k;
        const CMatrix g = gaussian_matrix(rng, dim, k);
        xs.push_back(g * g.adjoint());
    }
    CMatrix s = CMatrix::Zero(dim, dim);
    for (const auto& x : xs) {
        s += x;
    }
    const CMatrix t = inverse_sqrt_psd(s);
    std::vector<CMatrix> effects;
    for (const auto& x : xs) {
        CMatrix e = t * x * t;
        effects.push_back((e + e.adjoint()) / 2.0);
    }
    return Povm(OutcomeSpace::indexed(n_outcomes), effects);
}

JointPovm random_joint_povm(Rng& rng, int dim, int n_first, int n_second)
{
    const Povm p = random_povm(rng, dim, n_first * n_second);
    return JointPovm(OutcomeSpace::indexed(n_first), OutcomeSpace::indexed(n_second), p.effects());
}

HermObservable random_observable(Rng& rng, int dim)
{
    const CMatrix g = gaussian_matrix(rng, dim, dim);
    return HermObservable(CMatrix((g + g.adjoint()) / 2.0));
}

ClassObservable random_function(Rng& rng, int n)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    RVector v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = normal(rng);
    }
    return ClassObservable(v);
}

ProbDist random_distribution(Rng& rng, int n, double zero_fraction)
{
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    RVector w(n);
    for (int i = 0; i < n; ++i) {
        w(i) = expo(rng);
        if (unif(rng) < zero_fraction) {
            w(i) = 0;
        }
    }
    if (w.sum() == 0) {
        w(pick(rng)) = 1.0;
    }
    return ProbDist(RVector(w / w.sum()));
}

StochasticChannel random_channel(Rng& rng, int n_in, int n_out)
{
    std::exponential_distribution<double> expo(1.0);
    RMatrix k(n_out, n_in);
    for (int i = 0; i < n_in; ++i) {
        for (int j = 0; j < n_out; ++j) {
            k(j, i) = expo(rng);
        }
        k.col(i) /= k.col(i).sum();
    }
    return StochasticChannel(k);
}

RandomInstance random_instance(const RandomSpec& spec)
{
    if (spec.dim < 2 || spec.n_outcomes < 1) {
        throw InvalidArgument("random instances need dim >= 2 and at least one outcome");
    }
    Rng rng(spec.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    StateKind kind = StateKind::full_rank;
    int rank = spec.dim;
    if (u < spec.pure_fraction) {
        kind = StateKind::pure;
        rank = 1;
    } else if (u < spec.pure_fraction + spec.rank_deficient_fraction) {
        kind = StateKind::rank_deficient;
        rank = std::uniform_int_distribution<int>(1, spec.dim - 1)(rng);
    }
    DensityState rho = random_state(rng, spec.dim, rank);
    JointPovm joint = random_joint_povm(rng, spec.dim, spec.n_outcomes, spec.n_outcomes);
    auto [first, second] = marginals(joint);
    HermObservable a = random_observable(rng, spec.dim);
    HermObservable b = random_observable(rng, spec.dim);
    ClassObservable f = random_function(rng, spec.n_outcomes);
    ClassObservable g = random_function(rng, spec.n_outcomes);
    HermObservable a_repr = adjoint_apply(first, f);
    HermObservable b_repr = adjoint_apply(second, g);
    return RandomInstance{kind, rho, joint, first, second, a, b, f, g, a_repr, b_repr};
}

// ---------------------------------------------------------------- gauge minimization

double raw_gauge_sq(const HermObservable& a, const ClassObservable& f, const Povm& m, const DensityState& rho)
{
    const int d = m.dim();
    CMatrix big_f = CMatrix::Zero(d, d);
    double classical = 0;
    for (int w = 0; w < m.size(); ++w) {
        big_f += f(w) * m.effect(w);
        classical += f(w) * f(w) * trace_re(m.effect(w) * rho.matrix());
    }
    const CMatrix diff = a.matrix() - big_f;
    return trace_re(diff * diff * rho.matrix()) + classical - trace_re(big_f * big_f * rho.matrix());
}

namespace {

struct Quadratic {
    RMatrix q;  // q(f) = f' Q f - 2 b' f + c
    RVector b;
    double c = 0;
};

Quadratic polarize(const HermObservable& a, const Povm& m, const DensityState& rho)
{
    const int n = m.size();
    auto eval = [&](const RVector& v) { return raw_gauge_sq(a, ClassObservable(v), m, rho); };
    Quadratic out;
    out.c = eval(RVector::Zero(n));
    RVector single(n);
    for (int i = 0; i < n; ++i) {
        single(i) = eval(RVector::Unit(n, i));
    }
    out.q.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double pair = eval(RVector(RVector::Unit(n, i) + RVector::Unit(n, j)));
            out.q(i, j) = out.q(j, i) = (pair - single(i) - single(j) + out.c) / 2.0;
        }
    }
    out.b.resize(n);
    for (int i = 0; i < n; ++i) {
        out.b(i) = (out.q(i, i) - single(i) + out.c) / 2.0;
    }
    return out;
}

RVector least_norm_solve(const RMatrix& q, const RVector& b)
{
    Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(q);
    cod.setThreshold(1e-12);
    return cod.solve(b);
}

} // namespace

GaugeMinimum minimize_gauge(const HermObservable& a, const Povm& m, const DensityState& rho, bool constrained,
                            double feasibility_tol)
{
    const Quadratic quad = polarize(a, m, rho);
    const int n = m.size();
    RVector f;
    if (!constrained) {
        f = least_norm_solve(quad.q, quad.b);
    } else {
        // Constraint rows: real and imaginary parts of sum_w f_w E_w rho^{1/2} = A rho^{1/2}.
        const int d = m.dim();
        RMatrix c(2 * d * d, n);
        for (int w = 0; w < n; ++w) {
            const CMatrix col = m.effect(w) * rho.sqrt();
            for (int k = 0; k < d * d; ++k) {
                c(k, w) = col(k).real();
                c(d * d + k, w) = col(k).imag();
            }
        }
        const CMatrix target_m = a.matrix() * rho.sqrt();
        RVector target(2 * d * d);
        for (int k = 0; k < d * d; ++k) {
            target(k) = target_m(k).real();
            target(d * d + k) = target_m(k).imag();
        }
        Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(c);
        cod.setThreshold(1e-10);
        const RVector particular = cod.solve(target);
        const double miss = (c * particular - target).norm();
        if (miss > feasibility_tol * std::max(1.0, target.norm())) {
            throw NotRepresentable("constraint is infeasible", miss);
        }
        Eigen::FullPivLU<RMatrix> lu(c);
        lu.setThreshold(1e-10);
        const RMatrix z = lu.kernel();
        if (lu.rank() == n) {
            f = particular;
        } else {
            const RMatrix qz = z.transpose() * quad.q * z;
            const RVector bz = z.transpose() * (quad.b - quad.q * particular);
            f = particular + z * least_norm_solve(qz, bz);
        }
    }
    GaugeMinimum out{ClassObservable(f), 0.0};
    out.value = std::sqrt(std::max(0.0, raw_gauge_sq(a, out.f, m, rho)));
    return out;
}

ClassObservable pushforward_by_linear_system(const Povm& m, const DensityState& rho, const HermObservable& a,
                                             double prob_tol)
{
    const int n = m.size();
    std::vector<int> support;
    RVector p(n);
    for (int w = 0; w < n; ++w) {
        p(w) = trace_re(m.effect(w) * rho.matrix());
        if (p(w) > prob_tol) {
            support.push_back(w);
        }
    }
    // Fixed family of test functions; any spanning family gives the same solution.
    Rng rng(0x5eed);
    const int s = static_cast<int>(support.size());
    RMatrix lhs(n, s);
    RVector rhs(n);
    for (int k = 0; k < n; ++k) {
        const ClassObservable g = random_function(rng, n);
        CMatrix g_op = CMatrix::Zero(m.dim(), m.dim());
        for (int w = 0; w < n; ++w) {
            g_op += g(w) * m.effect(w);
        }
        rhs(k) = trace_re(a.matrix() * g_op * rho.matrix());
        for (int j = 0; j < s; ++j) {
            lhs(k, j) = g(support[j]) * p(support[j]);
        }
    }
    const RVector sol = lhs.colPivHouseholderQr().solve(rhs);
    RVector f = RVector::Zero(n);
    for (int j = 0; j < s; ++j) {
        f(support[j]) = sol(j);
    }
    return ClassObservable(f);
}

RVector partial_inverse_by_constrained_solve(const RMatrix& a, const RVector& y, double eq_tol)
{
    Eigen::FullPivLU<RMatrix> lu(a);
    lu.setThreshold(1e-10);
    RVector x = lu.solve(y);
    const double miss = (a * x - y).norm();
    if (miss > eq_tol * std::max(1.0, y.norm())) {
        throw NotInRange("linear system has no solution", miss);
    }
    if (lu.rank() < a.cols()) {
        const RMatrix k = lu.kernel();
        const RVector coeff = (k.transpose() * k).ldlt().solve(k.transpose() * x);
        x -= k * coeff;
    }
    return x;
}

// ---------------------------------------------------------------- sampling

double SampleRun::mean(const ClassObservable& f) const
{
    return empirical.dot(f.values());
}

double SampleRun::variance(const ClassObservable& f) const
{
    const double mu = mean(f);
    return (empirical.array() * (f.values().array() - mu).square()).sum();
}

SampleRun sample(const ProbDist& p, long long n, std::uint64_t seed, int workers)
{
    if (n < 1) {
        throw InvalidArgument("sample size must be at least 1");
    }
    const int k = p.size();
    std::vector<double> weights(p.weights().data(), p.weights().data() + k);
    std::vector<RVector> shard_counts(kSampleShards, RVector::Zero(k));

    auto run_shard = [&](int s) {
        const long long lo = n * s / kSampleShards;
        const long long hi = n * (s + 1) / kSampleShards;
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
        std::discrete_distribution<int> dist(weights.begin(), weights.end());
        for (long long i = lo; i < hi; ++i) {
            shard_counts[s](dist(rng)) += 1.0;
        }
    };

    if (workers <= 0) {
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    workers = std::min(workers, kSampleShards);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int s = w; s < kSampleShards; s += workers) {
                run_shard(s);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }

    SampleRun run;
    run.n_samples = n;
    run.seed = seed;
    run.counts = RVector::Zero(k);
    for (const auto& c : shard_counts) {
        run.counts += c;
    }
    run.empirical = run.counts / static_cast<double>(n);
    return run;
}

SampleRun sample(const Povm& m, const DensityState& rho, long long n, std::uint64_t seed, int workers)
{
    return sample(apply(m, rho), n, seed, workers);
}

MomentCheck check_mean(const SampleRun& run, const ClassObservable& f, const ProbDist& p)
{
    MomentCheck c;
    c.empirical = run.mean(f);
    c.expected = expectation(f, p);
    c.band = 5.0 * std_dev(f, p) / std::sqrt(static_cast<double>(run.n_samples));
    c.pass = std::abs(c.empirical - c.expected) <= c.band;
    return c;
}

MomentCheck check_variance(const SampleRun& run, const ClassObservable& f, const ProbDist& p)
{
    MomentCheck c;
    const double n = static_cast<double>(run.n_samples);
    const double mu = expectation(f, p);
    const double var = std::pow(std_dev(f, p), 2);
    const double mu4 = (p.weights().array() * (f.values().array() - mu).pow(4)).sum();
    c.empirical = run.variance(f);
    c.expected = var;
    c.band = 5.0 * std::sqrt(std::max(0.0, mu4 - var * var) / n) + 25.0 * var / n;
    c.pass = std::abs(c.empirical - c.expected) <= c.band;
    return c;
}

} // namespace urel::oracle
