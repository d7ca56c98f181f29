#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hua/domains.hpp"
#include "support/generators.hpp"

using namespace hua;

namespace {

double smallest_eigenvalue(const ComplexMatrix &z)
{
    const ComplexMatrix v = identity(static_cast<std::size_t>(z.rows())) - z * z.adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(v);
    return es.eigenvalues().minCoeff();
}

const std::vector<DomainSpec> matrix_specs{DomainSpec::type_I(1, 3), DomainSpec::type_I(2, 2),
                                           DomainSpec::type_I(2, 3), DomainSpec::type_II(2),
                                           DomainSpec::type_II(3),   DomainSpec::type_III(3),
                                           DomainSpec::type_III(4)};

} // namespace

TEST(Kappa, HardCodedTable)
{
    EXPECT_EQ(kappa(DomainSpec::type_I(2, 3)), (Rational{3, 1}));
    EXPECT_EQ(kappa(DomainSpec::type_I(1, 5)), (Rational{5, 1}));
    EXPECT_EQ(kappa(DomainSpec::type_II(3)), (Rational{2, 1}));
    EXPECT_EQ(kappa(DomainSpec::type_II(2)), (Rational{3, 2}));
    EXPECT_EQ(kappa(DomainSpec::type_III(4)), (Rational{3, 2}));
    EXPECT_EQ(kappa(DomainSpec::type_III(3)), (Rational{3, 2}));
    EXPECT_EQ(kappa(DomainSpec::type_III(6)), (Rational{5, 2}));
    EXPECT_THROW(kappa(DomainSpec::type_IV(2)), UnsupportedError);
}

TEST(Spec, ParseAndShape)
{
    EXPECT_EQ(DomainSpec::parse("I:2,3"), DomainSpec::type_I(2, 3));
    EXPECT_EQ(DomainSpec::parse("II:2"), DomainSpec::type_II(2));
    EXPECT_EQ(DomainSpec::parse("III:4"), DomainSpec::type_III(4));
    EXPECT_EQ(DomainSpec::parse("IV:2"), DomainSpec::type_IV(2));
    EXPECT_EQ(DomainSpec::type_IV(3).rows(), 1u);
    EXPECT_EQ(DomainSpec::type_I(2, 3).dimension(), 6u);
    EXPECT_THROW(DomainSpec::parse("I:3,2"), std::invalid_argument);
    EXPECT_THROW(DomainSpec::parse("V:2"), std::invalid_argument);
    EXPECT_THROW(DomainSpec::parse("II"), std::invalid_argument);
    EXPECT_THROW(DomainSpec::parse("II:x"), std::invalid_argument);
}

TEST(MatrixPoint, EnforcesSymmetry)
{
    ComplexMatrix z(2, 2);
    z << 0.1, 0.2, 0.3, 0.1;
    EXPECT_THROW(MatrixPoint(DomainSpec::type_II(2), z), std::invalid_argument);
    EXPECT_THROW(MatrixPoint(DomainSpec::type_III(2), z), std::invalid_argument);
    EXPECT_THROW(MatrixPoint(DomainSpec::type_I(2, 3), z), ShapeError);
    EXPECT_NO_THROW(MatrixPoint(DomainSpec::type_I(2, 2), z));
}

TEST(Contains, ZeroHasMarginOne)
{
    for (const auto &spec : matrix_specs) {
        const auto m = contains(spec, ComplexMatrix::Zero(spec.rows(), spec.cols()));
        EXPECT_TRUE(m.inside);
        EXPECT_DOUBLE_EQ(m.margin, 1.0);
    }
    EXPECT_TRUE(contains(DomainSpec::type_IV(2), ComplexMatrix::Zero(1, 2)).inside);
}

TEST(Contains, HandExamples)
{
    EXPECT_FALSE(contains(DomainSpec::type_I(1, 1), from_row_major(1, 1, {1.5})).inside);
    const auto iv = contains(DomainSpec::type_IV(2), from_row_major(1, 2, {0.5, 0.0}));
    EXPECT_TRUE(iv.inside);
    // 1 - 2(0.25) + 0.0625 = 0.5625; 1 - 0.0625 = 0.9375
    EXPECT_NEAR(iv.margin, 0.5625, 1e-15);
    // Large real vectors satisfy the first inequality but not the second.
    EXPECT_FALSE(contains(DomainSpec::type_IV(2), from_row_major(1, 2, {2.0, 0.0})).inside);
}

TEST(Contains, UnitaryInvarianceTypeI)
{
    hua::testing::Rng rng(31);
    const auto spec = DomainSpec::type_I(2, 3);
    for (const auto &p : sample_interior(spec, 5, 50)) {
        const ComplexMatrix u = detail::haar_unitary(rng, 2);
        const ComplexMatrix v = detail::haar_unitary(rng, 3);
        EXPECT_NEAR(contains(spec, u * p.value * v).margin, contains(p).margin, 1e-13);
    }
}

TEST(SampleInterior, MarginFloorAndConstraints)
{
    for (const auto &spec : matrix_specs) {
        const auto pts = sample_interior(spec, 17, 100);
        ASSERT_EQ(pts.size(), 100u);
        for (const auto &p : pts) {
            const auto m = contains(p);
            EXPECT_TRUE(m.inside);
            EXPECT_GE(m.margin, default_margin_floor - 1e-12) << spec.name();
            EXPECT_NEAR(m.margin, smallest_eigenvalue(p.value), 1e-12);
            if (spec.family == Family::II) {
                EXPECT_EQ(p.value, p.value.transpose());
            }
            if (spec.family == Family::III) {
                EXPECT_EQ(p.value, -p.value.transpose());
            }
        }
    }
    for (const auto &p : sample_interior(DomainSpec::type_IV(3), 3, 100)) {
        EXPECT_GE(contains(p).margin, default_margin_floor);
    }
}

TEST(SampleInterior, RescaledNormGivesEigenvalueMargin)
{
    // Norm 0.8 in I(m,n): smallest eigenvalue of I - zz* is 1 - 0.64 = 0.36 >= 0.19.
    hua::testing::Rng rng(32);
    for (int t = 0; t < 20; ++t) {
        ComplexMatrix g = hua::testing::gaussian_matrix(rng, 2, 3);
        g *= 0.8 / operator_norm(g);
        EXPECT_GE(smallest_eigenvalue(g), 0.19);
        EXPECT_NEAR(contains(DomainSpec::type_I(2, 3), g).margin, 0.36, 1e-12);
    }
}

TEST(SampleInterior, DeterministicInSeed)
{
    const auto a = sample_interior(DomainSpec::type_II(3), 99, 5);
    const auto b = sample_interior(DomainSpec::type_II(3), 99, 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].value, b[i].value);
    }
}

TEST(SampleSilov, UnitaryAndStructured)
{
    for (const auto &spec : {DomainSpec::type_I(1, 3), DomainSpec::type_I(2, 3), DomainSpec::type_II(2),
                             DomainSpec::type_II(3), DomainSpec::type_III(4)}) {
        for (const auto &w : sample_silov(spec, 41, 50)) {
            const ComplexMatrix ww = w.value * w.value.adjoint();
            EXPECT_LT(max_abs(ww - identity(spec.rows())), 1e-12) << spec.name();
            if (spec.family != Family::I) {
                EXPECT_LT(max_abs(w.value.adjoint() * w.value - identity(spec.cols())), 1e-12);
            }
        }
    }
    for (const auto &w : sample_silov(DomainSpec::type_I(1, 4), 2, 20)) {
        EXPECT_NEAR(w.value.norm(), 1.0, 1e-14);
    }
}

TEST(SampleSilov, UnsupportedFamilies)
{
    EXPECT_THROW(sample_silov(DomainSpec::type_III(3), 1, 1), UnsupportedError);
    EXPECT_THROW(sample_silov(DomainSpec::type_IV(2), 1, 1), UnsupportedError);
}

TEST(SampleSilov, PairingIsNonSingular)
{
    // det(I - z w*) != 0 for every interior z and Silov w.
    for (const auto &spec : {DomainSpec::type_I(2, 3), DomainSpec::type_II(2), DomainSpec::type_III(4)}) {
        const auto zs = sample_interior(spec, 51, 100);
        const auto ws = sample_silov(spec, 52, 100);
        double worst = 1.0;
        for (const auto &z : zs) {
            for (const auto &w : ws) {
                const ComplexMatrix wm = identity(spec.rows()) - z.value * w.value.adjoint();
                worst = std::min(worst, std::abs(det(wm)));
            }
        }
        EXPECT_GT(worst, 0.0) << spec.name();
    }
}

TEST(PseudoBoundary, RankDeficient)
{
    const MatrixPoint w = pseudo_boundary_III3(3);
    Eigen::JacobiSVD<ComplexMatrix> svd(w.value);
    EXPECT_NEAR(svd.singularValues()(0), 1.0, 1e-12);
    EXPECT_NEAR(svd.singularValues()(1), 1.0, 1e-12);
    EXPECT_NEAR(svd.singularValues()(2), 0.0, 1e-12);
    EXPECT_GT(max_abs(identity(3) - w.value.adjoint() * w.value), 0.5);
}

TEST(BiholoIII3, MapsBallIntoDomain)
{
    EXPECT_EQ(max_abs(biholo_III3({0.0, 0.0, 0.0}).value), 0.0);
    EXPECT_GT(contains(biholo_III3({0.9, 0.0, 0.0})).margin, 0.0);
    EXPECT_THROW(biholo_III3({1.0, 0.0, 0.0}), OutsideDomainError);
    hua::testing::Rng rng(61);
    for (int t = 0; t < 100; ++t) {
        const auto lam = hua::testing::ball_point(rng, 3, 0.999);
        const MatrixPoint z = biholo_III3(lam);
        EXPECT_TRUE(contains(z).inside);
        const double norm2 = std::norm(lam[0]) + std::norm(lam[1]) + std::norm(lam[2]);
        EXPECT_NEAR(contains(z).margin, 1.0 - norm2, 1e-12);
    }
    // Margin closes as |z| -> 1 along a ray.
    double prev = 1.0;
    for (double r : {0.5, 0.9, 0.99, 0.999, 0.9999}) {
        const double m = contains(biholo_III3({r / std::sqrt(2.0), Complex(0.0, r / std::sqrt(2.0)), 0.0})).margin;
        EXPECT_LT(m, prev);
        prev = m;
    }
    EXPECT_LT(prev, 3e-4);
}

TEST(BiholoIV2, RoundTripAndMembership)
{
    EXPECT_EQ(max_abs(biholo_IV2(0.0, 0.0).value), 0.0);
    hua::testing::Rng rng(62);
    std::uniform_real_distribution<double> r(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    for (int t = 0; t < 1000; ++t) {
        const Complex z1 = std::polar(r(rng), phase(rng));
        const Complex z2 = std::polar(r(rng), phase(rng));
        const MatrixPoint w = biholo_IV2(z1, z2);
        EXPECT_TRUE(contains(w).inside);
        const auto [y1, y2] = biholo_IV2_inverse(w.value);
        EXPECT_LT(std::abs(y1 - z1) + std::abs(y2 - z2), 1e-15);
        // The defining function factors as (1 - |z1|^2)(1 - |z2|^2).
        const double norm2 = w.value.squaredNorm();
        const double s2 = std::norm(w.value(0, 0) * w.value(0, 0) + w.value(0, 1) * w.value(0, 1));
        EXPECT_NEAR(1.0 - 2.0 * norm2 + s2, (1.0 - std::norm(z1)) * (1.0 - std::norm(z2)), 1e-14);
    }
    EXPECT_THROW(biholo_IV2(1.0, 0.0), OutsideDomainError);
}

TEST(BiholoIV2, InverseFormulaAloneDoesNotMapIntoIV2)
{
    // (z1 + i z2, z1 - i z2) sends the polydisc point (0.5, 0.5i) to (0, 1),
    // which is on the boundary of IV(2); the forward map must be its inverse.
    const Complex z1 = 0.5;
    const Complex z2(0.0, 0.5);
    const ComplexMatrix image = from_row_major(1, 2, {z1 + I_unit * z2, z1 - I_unit * z2});
    EXPECT_LE(contains(DomainSpec::type_IV(2), image).margin, 1e-15);
    EXPECT_TRUE(contains(biholo_IV2(z1, z2)).inside);
}
