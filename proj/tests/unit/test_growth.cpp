#include <gtest/gtest.h>

#include <cmath>

#include "orlicz/errors.hpp"
#include "orlicz/growth.hpp"
#include "seeded.hpp"

using namespace orlicz;

TEST(Growth, MorreyPowerValues) {
    auto phi = GrowthFunction::morrey(4.0, 2);
    EXPECT_NEAR(phi(4.0), 0.5, 1e-15);
    EXPECT_NEAR(phi.log_eval(4.0), std::log(0.5), 1e-15);
    EXPECT_THROW(phi(0.0), DomainError);
    EXPECT_THROW(phi(-1.0), DomainError);
}

TEST(Growth, MorreyCertificateIsExact) {
    auto cert = certify_class(GrowthFunction::morrey(4.0, 2), default_class_grid());
    ASSERT_TRUE(cert.C1 && cert.C2 && cert.C3);
    EXPECT_NEAR(*cert.C1, 1.0, 1e-12);
    EXPECT_NEAR(*cert.C2, 1.0, 1e-12);
    EXPECT_NEAR(*cert.C3, 1.0, 1e-12);
    EXPECT_TRUE(cert.in_G0);
    EXPECT_TRUE(cert.in_G2dec());
    auto pair = doubling_constants(cert);
    EXPECT_NEAR(pair.first, 1.0, 1e-12);
    EXPECT_NEAR(pair.second, std::sqrt(2.0), 1e-12);
}

TEST(Growth, ConstantIsNotInG0) {
    auto cert = certify_class(GrowthFunction::constant(2.0), default_class_grid());
    EXPECT_FALSE(cert.in_G0);
    ASSERT_TRUE(cert.C1 && cert.C2 && cert.C3);
    EXPECT_NEAR(*cert.C1, 1.0, 1e-15);
    // phi(rs) / (phi(r) phi(s)) = 1/2, clamped to 1; phi(1/r) phi(r) = 4
    EXPECT_NEAR(cert.C2_empirical, 0.5, 1e-15);
    EXPECT_NEAR(*cert.C3, 4.0, 1e-15);
    EXPECT_FALSE(cert.in_G2dec());
}

TEST(Growth, IncreasingPowerIsNotAlmostDecreasing) {
    auto cert = certify_class(GrowthFunction::power(1.0), default_class_grid());
    EXPECT_FALSE(cert.almost_decreasing());
    EXPECT_THROW(doubling_constants(cert), PreconditionError);
}

TEST(Growth, OscillatingConstantsAreBounded) {
    // r^{-1} (2 + sin log r): the ratio of the bracket factors is at most 3
    auto cert = certify_class(GrowthFunction::oscillating(-1.0), log_grid(1e-6, 1e6, 400));
    ASSERT_TRUE(cert.C1.has_value());
    EXPECT_GE(*cert.C1, 1.0);
    EXPECT_LE(*cert.C1, 3.0 + 1e-12);
    ASSERT_TRUE(cert.C2.has_value());
    EXPECT_LE(*cert.C2, 3.0 + 1e-12);
}

TEST(Growth, GridContract) {
    auto phi = GrowthFunction::morrey(2.0, 1);
    std::vector<double> narrow = log_grid(1.0, 1e3, 10);
    EXPECT_THROW(certify_class(phi, narrow), UsageError);
    std::vector<double> one{1.0};
    EXPECT_THROW(certify_class(phi, one), UsageError);
    std::vector<double> unsorted{1e-6, 1e6, 1.0};
    EXPECT_THROW(certify_class(phi, unsorted), UsageError);
}

TEST(Growth, CertificateRespectsScalingOracle) {
    // scale s: C1 unchanged, C2 -> C2 / s, C3 -> C3 s^2 before clamping
    auto base = certify_class(GrowthFunction::power(-0.5, 1.0), default_class_grid());
    auto scaled = certify_class(GrowthFunction::power(-0.5, 3.0), default_class_grid());
    EXPECT_NEAR(scaled.C1_empirical, base.C1_empirical, 1e-12);
    EXPECT_NEAR(scaled.C2_empirical, base.C2_empirical / 3.0, 1e-12);
    EXPECT_NEAR(scaled.C3_empirical, base.C3_empirical * 9.0, 1e-9);
}

TEST(Growth, LogPsiClosedForm) {
    Seeded g(21);
    for (int i = 0; i < 50; ++i) {
        int n = g.integer(1, 4);
        double p = g.uniform(1.0, 6.0), q = g.uniform(1.0, 3.0);
        int k = g.integer(1, n);
        double C = g.log_uniform(0.1, 10.0), r = g.log_uniform(1e-5, 1e5);
        double expect = (n / p) * std::log(r) - std::log(C * std::pow(r, k)) / q;
        double got = log_psi(GrowthFunction::morrey(p, n), YoungFunction::power(q), k, C, r);
        EXPECT_NEAR(got, expect, 1e-9 * std::max(1.0, std::abs(expect)));
    }
}

TEST(Growth, PsiDirectionsFollowExponentSign) {
    auto C = default_psi_C_grid();
    auto r = default_psi_grid();
    // Morrey n = 2, q = 1: Psi_k ~ r^{2/p - k}
    auto inc = psi_monotonicity(GrowthFunction::morrey(1.5, 2), YoungFunction::power(1.0), 1, C, r);
    EXPECT_EQ(inc.direction, PsiDirection::almost_increasing);
    auto dec = psi_monotonicity(GrowthFunction::morrey(3.0, 2), YoungFunction::power(1.0), 1, C, r);
    EXPECT_EQ(dec.direction, PsiDirection::almost_decreasing);
    EXPECT_NEAR(dec.A_dec, 1.0, 1e-9);
    auto flat = psi_monotonicity(GrowthFunction::morrey(2.0, 2), YoungFunction::power(1.0), 1, C, r);
    EXPECT_EQ(flat.direction, PsiDirection::constant);
    EXPECT_TRUE(flat.increasing());
    EXPECT_TRUE(flat.decreasing());
}

TEST(Growth, PsiNeitherForOscillatingExponent) {
    // log Psi_1 = -0.9 log(r) sin(log r) swings without bound in both directions
    auto phi = GrowthFunction::callable([](double r) { return std::pow(r, -1.0 + 0.9 * std::sin(std::log(r))); }, "swing");
    auto prof = psi_monotonicity(phi, YoungFunction::power(1.0), 1, default_psi_C_grid(), default_psi_grid());
    EXPECT_EQ(prof.direction, PsiDirection::neither);
}

TEST(Growth, PsiSmallPowerDriftIsNotMonotoneTheWrongWay) {
    // n = 3, p = 6.2, q = 2, k = 1: Psi ~ r^{(3/3.1 - 1)/2}, a slow decrease
    auto prof = psi_monotonicity(GrowthFunction::morrey(6.2, 3), YoungFunction::power(2.0), 1, default_psi_C_grid(),
                                 default_psi_grid());
    EXPECT_FALSE(prof.increasing()) << to_string(prof.direction) << " A_inc " << prof.A_inc;
    EXPECT_TRUE(prof.decreasing());
}

TEST(Growth, PsiArgumentContract) {
    auto phi = GrowthFunction::morrey(2.0, 1);
    auto Phi = YoungFunction::power(1.0);
    std::vector<double> C{1.0}, r{1.0, 2.0}, empty;
    EXPECT_THROW(psi_monotonicity(phi, Phi, 0, C, r), UsageError);
    EXPECT_THROW(psi_monotonicity(phi, Phi, 1, empty, r), UsageError);
}

TEST(Growth, DescribeGrid) {
    auto g = log_grid(1e-3, 1e3, 7);
    EXPECT_FALSE(describe_grid(g).empty());
}
