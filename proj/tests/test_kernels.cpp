#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hua/kernels.hpp"
#include "support/generators.hpp"

using namespace hua;

namespace {

std::vector<KernelPair> pairs(const DomainSpec &spec, std::uint64_t seed, std::size_t count)
{
    const auto zs = sample_interior(spec, seed, count);
    const auto ws = sample_silov(spec, seed + 1000, count);
    std::vector<KernelPair> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(KernelPair::make(zs[i], ws[i]));
    }
    return out;
}

} // namespace

TEST(Kernel, EqualsOneAtOrigin)
{
    for (const DomainSpec &spec : {DomainSpec::type_I(2, 3), DomainSpec::type_II(3), DomainSpec::type_III(4)}) {
        const MatrixPoint zero(spec, ComplexMatrix::Zero(spec.rows(), spec.cols()));
        for (const auto &w : sample_silov(spec, 5, 5)) {
            EXPECT_NEAR(poisson_szego(zero, w), 1.0, 1e-13) << spec.name();
        }
    }
}

TEST(Kernel, BallClosedForm)
{
    const DomainSpec spec = DomainSpec::type_I(1, 3);
    const auto zs = sample_interior(spec, 11, 30);
    const auto ws = sample_silov(spec, 12, 30);
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const ComplexMatrix &z = zs[i].value;
        const ComplexMatrix &w = ws[i].value;
        const Complex inner = (z * w.adjoint())(0, 0);
        const double expect = std::pow(1.0 - z.squaredNorm(), 3) / std::pow(std::norm(1.0 - inner), 3);
        EXPECT_NEAR(poisson_szego(zs[i], ws[i]) / expect, 1.0, 1e-12);
    }
}

TEST(Kernel, IntegratesToOneOverSilovBoundary)
{
    // Monte Carlo mean over Haar-distributed w; tolerance from the sample spread.
    for (const DomainSpec &spec : {DomainSpec::type_I(1, 2), DomainSpec::type_I(2, 2), DomainSpec::type_II(2)}) {
        ComplexMatrix z = 0.3 * identity(spec.rows());
        if (spec.cols() != spec.rows()) {
            z = ComplexMatrix::Zero(spec.rows(), spec.cols());
            z(0, 0) = 0.3;
            z(0, 1) = Complex(0.0, 0.2);
        }
        const MatrixPoint zp(spec, z);
        const auto ws = sample_silov(spec, 77, 40000);
        double sum = 0.0;
        double sum2 = 0.0;
        for (const auto &w : ws) {
            const double v = poisson_szego(zp, w);
            sum += v;
            sum2 += v * v;
        }
        const double n = static_cast<double>(ws.size());
        const double mean = sum / n;
        const double se = std::sqrt((sum2 / n - mean * mean) / n);
        EXPECT_NEAR(mean, 1.0, 5.0 * se + 1e-3) << spec.name();
    }
}

TEST(Kernel, RejectsIVAndOutsidePoints)
{
    const MatrixPoint z(DomainSpec::type_IV(3), ComplexMatrix::Zero(1, 3));
    EXPECT_THROW(KernelPair::make(z, z), UnsupportedError);
    const DomainSpec spec = DomainSpec::type_I(2, 2);
    const MatrixPoint out(spec, 2.0 * identity(2));
    EXPECT_THROW(KernelPair::make(out, sample_silov(spec, 1, 1)[0]), OutsideDomainError);
}

TEST(LogGradients, VanishAtZeroBoundaryPoint)
{
    for (const DomainSpec &spec : {DomainSpec::type_I(2, 3), DomainSpec::type_II(3), DomainSpec::type_III(4)}) {
        for (const auto &z : sample_interior(spec, 4, 5)) {
            const MatrixPoint w(spec, ComplexMatrix::Zero(spec.rows(), spec.cols()));
            const KernelPair p = KernelPair::make(z, w);
            EXPECT_LT(log_gradients(p).c.cwiseAbs().maxCoeff(), 1e-15);
        }
    }
}

TEST(LogGradients, BEqualsCAtDiagonal)
{
    // W(z, z) = V(z), so the two gradients agree at w = z.
    for (const DomainSpec &spec : {DomainSpec::type_I(2, 3), DomainSpec::type_II(3), DomainSpec::type_III(4)}) {
        for (const auto &z : sample_interior(spec, 8, 5)) {
            const KernelPair p = KernelPair::make(z, z);
            const LogGradients g = log_gradients(p);
            EXPECT_LT((g.b - g.c).cwiseAbs().maxCoeff(), 1e-14) << spec.name();
        }
    }
}

TEST(LogGradients, ClosedFormsMatchGenericAndFiniteDifferences)
{
    for (const DomainSpec &spec : {DomainSpec::type_II(2), DomainSpec::type_II(3), DomainSpec::type_III(4)}) {
        for (const KernelPair &p : pairs(spec, 21, 10)) {
            const ComplexVector generic = log_gradients(p).c;
            EXPECT_LT((c_closed_form(p) - generic).cwiseAbs().maxCoeff(), 1e-12) << spec.name();
            const double scale = std::max(1.0, generic.cwiseAbs().maxCoeff());
            EXPECT_LT((c_finite_difference(p) - generic).cwiseAbs().maxCoeff() / scale, 1e-7) << spec.name();
            // conj(c) seen from the other side: dbar log conj(det W) = conj(c).
            EXPECT_LT((c_conjugate_closed_form(p) - generic.conjugate()).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(LogDetHessian, MatchesPolynomialRoute)
{
    for (const DomainSpec &spec : {DomainSpec::type_I(2, 2), DomainSpec::type_II(2), DomainSpec::type_III(4)}) {
        const DeterminantPolynomials dp(spec);
        for (const KernelPair &p : pairs(spec, 31, 5)) {
            const ComplexMatrix exact = dp.normalized_kernel_hessian(p.z, p.w, p.kappa);
            const ComplexMatrix assembled = normalized_kernel_hessian_assembled(p, Convention::independent);
            const ComplexMatrix reduced = reduce_hessian(exact, p.cols(), spec.symmetry());
            const double scale = std::max(1.0, max_abs(reduced));
            EXPECT_LT(max_abs(reduced - assembled) / scale, 1e-9) << spec.name();
        }
    }
}

TEST(LogDetHessian, MatchesFiniteDifferences)
{
    for (const DomainSpec &spec : {DomainSpec::type_I(2, 3), DomainSpec::type_II(3)}) {
        for (const KernelPair &p : pairs(spec, 41, 4)) {
            const WirtingerField f = WirtingerField::opaque(
                spec.rows(), spec.cols(), [](const ComplexMatrix &z) { return Complex(std::log(det(hua_V(z)).real())); });
            const ComplexMatrix fd = wirtinger_hessian(f, p.z, spec.symmetry(), Convention::independent, {0.0, true});
            const ComplexMatrix closed = log_det_V_hessian(p);
            EXPECT_LT(max_abs(fd - closed) / std::max(1.0, max_abs(closed)), 1e-7) << spec.name();
        }
    }
}

TEST(IdentityTensors, DirectMatchesClosed)
{
    for (const DomainSpec &spec :
         {DomainSpec::type_II(2), DomainSpec::type_II(3), DomainSpec::type_III(4), DomainSpec::type_III(6)}) {
        for (const KernelPair &p : pairs(spec, 51, 10)) {
            const IdentityTensors d = identity_tensors_direct(p);
            const IdentityTensors c = identity_tensors_closed(p);
            const double scale = std::max({1.0, max_abs(d.A), max_abs(d.C)});
            EXPECT_LT(max_tensor_gap(d, c) / scale, 1e-9) << spec.name();
        }
    }
}

TEST(IdentityTensors, FVanishesOnEvenSilovBoundary)
{
    for (const KernelPair &p : pairs(DomainSpec::type_III(4), 61, 20)) {
        EXPECT_LT(max_abs(lemma_F(p)), 1e-12);
    }
}

TEST(IdentityTensors, RankDeficientBoundaryBreaksIdentity)
{
    // III(3): w with a zero singular value is not unitary-like, F != 0 and the
    // signed sum does not cancel.
    const DomainSpec spec = DomainSpec::type_III(3);
    const auto zs = sample_interior(spec, 71, 10);
    double worst_sum = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const KernelPair p = KernelPair::make(zs[i], pseudo_boundary_III3(100 + i));
        EXPECT_GT(max_abs(lemma_F(p)), 1e-3);
        worst_sum = std::max(worst_sum, max_abs(theorem_sum(identity_tensors_direct(p))));
        // Closed and direct tensors still agree term by term.
        const IdentityTensors d = identity_tensors_direct(p);
        const IdentityTensors c = identity_tensors_closed(p);
        EXPECT_LT(max_tensor_gap(d, c) / std::max(1.0, max_abs(d.C)), 1e-9);
    }
    EXPECT_GT(worst_sum, 1e-2);
}

TEST(Theorem, ComponentsAnnihilateKernel)
{
    for (const DomainSpec &spec : {DomainSpec::type_I(2, 2), DomainSpec::type_I(2, 3), DomainSpec::type_II(2),
                                   DomainSpec::type_II(3), DomainSpec::type_III(4)}) {
        const DeterminantPolynomials dp(spec);
        Theorem22Options opts;
        opts.polynomials = &dp;
        for (const KernelPair &p : pairs(spec, 81, 6)) {
            const Theorem22Check c = check_theorem22(p, opts);
            EXPECT_LT(max_abs(c.direct_sum), 1e-9) << spec.name();
            EXPECT_LT(max_abs(c.exact), 1e-8) << spec.name();
            EXPECT_LT(max_abs(c.fd), 1e-6) << spec.name();
            if (c.closed_sum) {
                EXPECT_LT(max_abs(*c.closed_sum), 1e-9) << spec.name();
            }
        }
    }
}

TEST(Theorem, NonBoundaryPointIsNotAnnihilated)
{
    // Interior w: P(., w) is no longer a kernel of the operator.
    const DomainSpec spec = DomainSpec::type_I(2, 2);
    const auto zs = sample_interior(spec, 91, 5);
    const auto ws = sample_interior(spec, 92, 5);
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const KernelPair p = KernelPair::make(zs[i], ws[i]);
        Theorem22Options opts;
        const Theorem22Check c = check_theorem22(p, opts);
        EXPECT_GT(max_abs(c.direct_sum), 1e-3);
        EXPECT_LT(max_abs(c.direct_sum - c.fd), 1e-6 * std::max(1.0, max_abs(c.direct_sum)));
    }
}

TEST(Theorem, ResidualPairForComponent)
{
    const DomainSpec spec = DomainSpec::type_II(2);
    const auto z = sample_interior(spec, 3, 1)[0];
    const auto w = sample_silov(spec, 4, 1)[0];
    const auto [r1, r2] = check_theorem22(z, w, 0, 1);
    EXPECT_LT(r1, 1e-6);
    EXPECT_LT(r2, 1e-9);
}
