#include <cmath>
#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

#include "hua/dirichlet.hpp"
#include "hua/operators.hpp"
#include "support/generators.hpp"

using namespace hua;
using hua::testing::Rng;

namespace {

Polynomial z(std::size_t n, std::size_t a)
{
    return Polynomial::variable(n, a);
}

Polynomial zb(std::size_t n, std::size_t a)
{
    return Polynomial::conj_variable(n, a);
}

ComplexMatrix row(const std::vector<Complex> &v)
{
    return from_row_major(1, v.size(), v);
}

} // namespace

TEST(Bidegree, ProjectionIsHarmonicAndBihomogeneous)
{
    Rng rng(5);
    for (std::size_t n = 2; n <= 4; ++n) {
        for (int p = 0; p <= 3; ++p) {
            for (int q = 0; q <= 3; ++q) {
                const BidegreeHarmonic f = make_bidegree(n, p, q, 100 * n + 10 * p + q);
                EXPECT_TRUE(f.f.is_bihomogeneous(p, q));
                EXPECT_LT(max_coefficient(euclidean_laplacian(f.f)), 1e-12) << n << p << q;
                EXPECT_GT(max_coefficient(f.f), 1e-6);
                // f(lambda z) = lambda^p conj(lambda)^q f(z).
                const auto x = hua::testing::ball_point(rng, n, 0.9);
                const Complex lambda = hua::testing::gaussian_complex(rng) * 0.5;
                std::vector<Complex> lx;
                for (const auto &v : x) {
                    lx.push_back(lambda * v);
                }
                const Complex expect = std::pow(lambda, p) * std::pow(std::conj(lambda), q) * f(x);
                EXPECT_LT(std::abs(f(lx) - expect), 1e-12 * std::max(1.0, std::abs(expect)));
            }
        }
    }
}

TEST(Bidegree, HarmonicInputsAreFixed)
{
    const std::size_t n = 3;
    for (int p = 1; p <= 3; ++p) {
        for (int q = 1; q <= 3; ++q) {
            const Polynomial f = z(n, 0).pow(p) * zb(n, 1).pow(q);
            const Polynomial h = harmonic_projection(f, p, q);
            EXPECT_LT(max_coefficient(h - f), 1e-15);
        }
    }
    // |z1|^2 - |z2|^2 and z1 conj(z2) are harmonic in n = 2.
    EXPECT_NO_THROW(bidegree_harmonic(z(2, 0) * zb(2, 0) - z(2, 1) * zb(2, 1), 1, 1));
    EXPECT_NO_THROW(bidegree_harmonic(z(2, 0) * zb(2, 1), 1, 1));
    EXPECT_THROW(bidegree_harmonic(z(2, 0) * zb(2, 0), 1, 1), std::invalid_argument);
    EXPECT_THROW(bidegree_harmonic(z(2, 0) * zb(2, 0), 2, 0), std::invalid_argument);
}

TEST(Bidegree, ProjectionOfNormSquaredTimesHarmonicVanishes)
{
    // |z|^2 g has zero harmonic part for harmonic g.
    const std::size_t n = 3;
    const Polynomial g = z(n, 0) * zb(n, 1);
    const Polynomial f = squared_norm_polynomial(n) * g;
    EXPECT_LT(max_coefficient(harmonic_projection(f, 2, 2)), 1e-15);
}

TEST(Bidegree, ConstantCase)
{
    const BidegreeHarmonic c = make_bidegree(3, 0, 0, 1);
    EXPECT_EQ(c.f.evaluate(std::vector<Complex>{0.1, 0.2, 0.3}), Complex(1.0));
}

TEST(TildeDirichlet, AnalyticHessianMatchesFiniteDifferences)
{
    const std::size_t n = 3;
    const DirichletSolution u = solve_tilde({make_bidegree(n, 1, 1, 4), make_bidegree(n, 2, 1, 5)}, n);
    const WirtingerField field = u.field();
    Rng rng(9);
    for (int i = 0; i < 10; ++i) {
        const ComplexMatrix x = row(hua::testing::ball_point(rng, n, 0.9));
        const ComplexMatrix exact = field.analytic_hessian(x);
        const WirtingerField plain = WirtingerField::opaque(1, n, [&](const ComplexMatrix &m) { return field(m); });
        const ComplexMatrix fd = wirtinger_hessian(plain, x, {0.0, true});
        EXPECT_LT(max_abs(exact - fd), 1e-7 * std::max(1.0, max_abs(exact)));
    }
}

TEST(TildeDirichlet, SolutionIsAnnihilated)
{
    const std::size_t n = 3;
    const Polynomial f = z(n, 0) * zb(n, 1);
    const DirichletSolution u = solve_tilde({bidegree_harmonic(f, 1, 1)}, n);
    const WirtingerField field = u.field();
    Rng rng(10);
    for (int i = 0; i < 100; ++i) {
        const MatrixPoint x(DomainSpec::type_I(1, n), row(hua::testing::ball_point(rng, n, 0.9)));
        EXPECT_LT(std::abs(apply(OperatorId::full(OperatorKind::TildeBall), field, x)), 1e-6);
    }
}

TEST(TildeDirichlet, PlainRadialProfileIsNotAnnihilated)
{
    // Negative control: dropping h leaves f = z1 conj(z2), which the operator does not kill.
    const std::size_t n = 3;
    const WirtingerField f = WirtingerField::polynomial(1, n, z(n, 0) * zb(n, 1));
    const MatrixPoint x(DomainSpec::type_I(1, n), row({0.3, 0.4, 0.1}));
    EXPECT_GT(std::abs(apply(OperatorId::full(OperatorKind::TildeBall), f, x)), 1e-3);
}

TEST(TildeDirichlet, MixedBidegreesAndBoundaryTrace)
{
    for (std::size_t n = 2; n <= 4; ++n) {
        std::vector<BidegreeHarmonic> fs;
        for (int p = 0; p <= 2; ++p) {
            for (int q = 0; q <= 2; ++q) {
                fs.push_back(make_bidegree(n, p, q, 7 * n + 3 * p + q));
            }
        }
        const DirichletSolution u = solve_tilde(fs, n);
        const WirtingerField field = u.field();
        Rng rng(11 + n);
        for (int i = 0; i < 20; ++i) {
            const MatrixPoint x(DomainSpec::type_I(1, n), row(hua::testing::ball_point(rng, n, 0.9)));
            EXPECT_LT(std::abs(apply(OperatorId::full(OperatorKind::TildeBall), field, x)), 1e-6);
        }
        for (int i = 0; i < 1000; ++i) {
            const auto s = hua::testing::unit_vector(rng, n);
            EXPECT_LT(std::abs(u(s) - u.boundary_value(s)), 1e-8);
        }
    }
}

TEST(TildeDirichlet, HolomorphicDataIsUnchanged)
{
    const std::size_t n = 3;
    const BidegreeHarmonic f = make_bidegree(n, 3, 0, 2);
    const DirichletSolution u = solve_tilde({f}, n);
    Rng rng(12);
    for (int i = 0; i < 20; ++i) {
        const auto x = hua::testing::ball_point(rng, n, 0.95);
        EXPECT_EQ(u(x), f(x));
    }
}

TEST(TildeDirichlet, LinearInBoundaryData)
{
    const std::size_t n = 3;
    const BidegreeHarmonic f = make_bidegree(n, 1, 2, 21);
    const BidegreeHarmonic g = make_bidegree(n, 1, 2, 22);
    const Complex a(0.7, -1.3);
    const BidegreeHarmonic sum{1, 2, f.f + a * g.f};
    const DirichletSolution uf = solve_tilde({f}, n);
    const DirichletSolution ug = solve_tilde({g}, n);
    const DirichletSolution us = solve_tilde({sum}, n);
    Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        const auto x = hua::testing::ball_point(rng, n, 0.95);
        EXPECT_LT(std::abs(us(x) - uf(x) - a * ug(x)), 1e-12);
    }
}

TEST(TildeDirichlet, NonsmoothProfileWhenMixed)
{
    for (std::size_t n = 2; n <= 5; ++n) {
        const DirichletSolution u = solve_tilde({make_bidegree(n, 1, 1, 3)}, n);
        const RadialProfile &h = u.profile(0);
        EXPECT_NE(classify_singularity(h.p(), h.q(), h.n()).kind, SingularityKind::smooth);
        EXPECT_EQ(classify_singularity(2, 0, static_cast<int>(n)).kind, SingularityKind::smooth);
    }
}

TEST(Poisson, KernelMassAndOrigin)
{
    for (const DomainSpec &spec : {DomainSpec::type_I(2, 2), DomainSpec::type_II(2), DomainSpec::type_III(4)}) {
        const auto pts = sample_interior(spec, 17, 3, 0.1);
        for (const auto &p : pts) {
            const MonteCarloEstimate e = poisson_solve(p, [](const ComplexMatrix &) { return Complex(1.0); }, 20000, 3);
            // 4 standard errors: this test makes many independent comparisons.
            EXPECT_LT(std::abs(e.mean - 1.0), 4.0 * e.std_error + 1e-12) << spec.name();
            EXPECT_GT(e.std_error, 0.0);
        }
        // At z = 0 the kernel is 1: the estimate is the plain average of phi.
        const MatrixPoint zero(spec, ComplexMatrix::Zero(spec.rows(), spec.cols()));
        auto phi = [](const ComplexMatrix &w) { return w(0, 1) * std::conj(w(0, 1)); };
        const MonteCarloEstimate e = poisson_solve(zero, phi, 5000, 4);
        Complex plain = 0.0;
        std::size_t c = 0;
        for (std::size_t chunk = 0; chunk * poisson_chunk < 5000; ++chunk) {
            std::seed_seq seq{std::uint64_t{4}, static_cast<std::uint64_t>(chunk)};
            std::array<std::uint64_t, 1> s{};
            seq.generate(s.begin(), s.end());
            for (const auto &w : sample_silov(spec, s[0], std::min<std::size_t>(poisson_chunk, 5000 - chunk * poisson_chunk))) {
                plain += phi(w.value);
                ++c;
            }
        }
        EXPECT_LT(std::abs(e.mean - plain / static_cast<double>(c)), 1e-12);
    }
}

TEST(Poisson, ReproducesPluriharmonicData)
{
    for (const DomainSpec &spec : {DomainSpec::type_I(2, 2), DomainSpec::type_II(2), DomainSpec::type_III(4)}) {
        // Re of a holomorphic polynomial: 0.3 + w_00 + 2 i w_01 + w_01^2.
        auto g = [](const ComplexMatrix &w) {
            return Complex(0.3) + w(0, 0) + Complex(0.0, 2.0) * w(0, 1) + w(0, 1) * w(0, 1);
        };
        auto phi = [&](const ComplexMatrix &w) { return Complex(g(w).real()); };
        for (const auto &p : sample_interior(spec, 23, 4, 0.1)) {
            const MonteCarloEstimate e = poisson_solve(p, phi, 40000, 5);
            EXPECT_LT(std::abs(e.mean - phi(p.value)), 4.0 * e.std_error) << spec.name();
        }
    }
}

TEST(Poisson, DeterministicAcrossWorkerCounts)
{
    const DomainSpec spec = DomainSpec::type_II(2);
    const MatrixPoint p = sample_interior(spec, 1, 1, 0.1)[0];
    auto phi = [](const ComplexMatrix &w) { return w(0, 0); };
    ::setenv("HUA_LAB_THREADS", "1", 1);
    const MonteCarloEstimate a = poisson_solve(p, phi, 20000, 8);
    ::setenv("HUA_LAB_THREADS", "4", 1);
    const MonteCarloEstimate b = poisson_solve(p, phi, 20000, 8);
    ::unsetenv("HUA_LAB_THREADS");
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Pluriharmonicity, Examples)
{
    const auto pts = sample_interior(DomainSpec::type_I(1, 2), 3, 10, 0.1);
    const WirtingerField re = WirtingerField::polynomial(1, 2, 0.5 * (z(2, 0) * z(2, 1) + zb(2, 0) * zb(2, 1)));
    const PluriharmonicityResult a = pluriharmonicity_test(re, pts);
    EXPECT_TRUE(a.pluriharmonic);
    EXPECT_EQ(a.max_hessian_norm, 0.0);
    const WirtingerField sq = WirtingerField::polynomial(1, 2, z(2, 0) * zb(2, 0));
    const PluriharmonicityResult b = pluriharmonicity_test(sq, pts);
    EXPECT_FALSE(b.pluriharmonic);
    EXPECT_NEAR(b.max_hessian_norm, 1.0, 1e-15);

    const auto iv = sample_interior(DomainSpec::type_IV(2), 4, 10, 0.1);
    const WirtingerField u = WirtingerField::polynomial(1, 2, z(2, 0) * zb(2, 0) - z(2, 1) * zb(2, 1));
    const PluriharmonicityResult c = pluriharmonicity_test(u, iv);
    EXPECT_FALSE(c.pluriharmonic);
    EXPECT_GE(c.max_hessian_norm, 1.0);
    for (const auto &p : iv) {
        EXPECT_LT(std::abs(apply(OperatorId::full(OperatorKind::Delta4), u, p)), 1e-10);
    }
}
