#include <gtest/gtest.h>

#include <cmath>

#include "orlicz/errors.hpp"
#include "orlicz/young.hpp"
#include "seeded.hpp"

using namespace orlicz;

TEST(Young, PowerEvaluates) {
    auto Phi = YoungFunction::power(2.0);
    EXPECT_DOUBLE_EQ(Phi(3.0), 9.0);
    EXPECT_EQ(Phi(0.0), 0.0);
    EXPECT_THROW(Phi(-1.0), DomainError);
    EXPECT_THROW(Phi(std::nan("")), DomainError);
    EXPECT_THROW(YoungFunction::power(0.0), UsageError);
}

TEST(Young, PowerInverseMatchesRoot) {
    Seeded g(11);
    for (double q : {1.0, 2.0, 5.0, 1.5}) {
        auto Phi = YoungFunction::power(q);
        for (int i = 0; i < 200; ++i) {
            double u = g.log_uniform(1e-12, 1e12);
            double expect = std::pow(u, 1.0 / q);
            EXPECT_NEAR(generalized_inverse(Phi, u).value, expect, 1e-9 * expect) << "q=" << q << " u=" << u;
        }
    }
}

TEST(Young, InverseBracketHoldsPredicate) {
    Seeded g(12);
    auto Phi = YoungFunction::power(3.0);
    for (int i = 0; i < 100; ++i) {
        double u = g.log_uniform(1e-6, 1e6);
        InverseResult r = generalized_inverse(Phi, u);
        EXPECT_LE(Phi(r.lo), u);
        EXPECT_GT(Phi(r.hi), u);
    }
}

TEST(Young, FlatSegmentInverseTakesRightEnd) {
    auto Phi = YoungFunction::flat_then_linear(1.0);
    EXPECT_NEAR(generalized_inverse(Phi, 0.0).value, 1.0, 1e-9);
    EXPECT_NEAR(generalized_inverse(Phi, 2.0).value, 3.0, 1e-9);
}

TEST(Young, InverseEdgeCases) {
    auto Phi = YoungFunction::power(2.0);
    EXPECT_EQ(generalized_inverse(Phi, kInfinity).value, kInfinity);
    EXPECT_THROW(generalized_inverse(Phi, -1.0), DomainError);
    EXPECT_THROW(generalized_inverse(Phi, std::nan("")), DomainError);
}

TEST(Young, DomainCapBoundsInverse) {
    auto Phi = YoungFunction::power(1.0).with_domain_cap(2.0);
    EXPECT_EQ(Phi(3.0), kInfinity);
    EXPECT_LE(generalized_inverse(Phi, 1e9).value, 2.0 + 1e-9);
}

TEST(Young, AppendixPresetBranchesMeet) {
    for (int n = 1; n <= 4; ++n) {
        auto Phi = YoungFunction::appendix_exp(n);
        const double a = std::ldexp(1.0, 2 * n);
        // left branch a exp(-1/t) at 1/2 is a e^{-2}
        EXPECT_NEAR(Phi(0.5), a * std::exp(-2.0), 1e-12 * a);
        EXPECT_NEAR(Phi(0.5 * (1 - 1e-12)), Phi(0.5), 1e-9 * Phi(0.5));
        EXPECT_NEAR(Phi(0.25), a * std::exp(-4.0), 1e-12 * a);
        EXPECT_NEAR(Phi(1.0), a * std::exp(-2.0) * std::ldexp(1.0, 2 * n), 1e-9 * Phi(1.0));
    }
    // n = 1 keeps Phi(1/2) = 4 e^{-2}
    EXPECT_NEAR(YoungFunction::appendix_exp(1)(0.5), 4.0 * std::exp(-2.0), 1e-15);
}

TEST(Young, LogEvalAgreesWithValue) {
    Seeded g(13);
    for (const auto& Phi : {YoungFunction::power(2.5), YoungFunction::appendix_exp(2), YoungFunction::flat_then_linear(0.5)})
        for (int i = 0; i < 100; ++i) {
            double t = g.log_uniform(1e-3, 1e3);
            double v = Phi(t);
            if (v > 0.0 && std::isfinite(v)) EXPECT_NEAR(Phi.log_eval(t), std::log(v), 1e-10 * std::max(1.0, std::abs(std::log(v))));
        }
}

TEST(Young, LogInverseMatchesPlainInverse) {
    Seeded g(14);
    auto Phi = YoungFunction::appendix_exp(1);
    for (int i = 0; i < 100; ++i) {
        double u = g.log_uniform(1e-8, 1e8);
        double a = generalized_inverse(Phi, u).value;
        double b = generalized_inverse_log(Phi, std::log(u)).value;
        EXPECT_NEAR(a, b, 1e-8 * a);
    }
}

TEST(Young, LogInverseReachesUnderflowRange) {
    auto Phi = YoungFunction::appendix_exp(1);
    // Phi(t) = 4 exp(-1/t); Phi^{-1}(u) = 1/log(4/u) for tiny u
    double log_u = -2000.0;
    double expect = 1.0 / (std::log(4.0) - log_u);
    EXPECT_NEAR(generalized_inverse_log(Phi, log_u).value, expect, 1e-9 * expect);
}

TEST(Young, SandwichHoldsOnFamilies) {
    auto u = log_grid(1e-12, 1e12, 2000);
    for (const auto& Phi : {YoungFunction::power(1.0), YoungFunction::power(2.0), YoungFunction::power(5.0),
                            YoungFunction::flat_then_linear(1.0), YoungFunction::appendix_exp(2)}) {
        SandwichReport r = verify_inverse_sandwich(Phi, u);
        EXPECT_TRUE(r.pass()) << Phi.label() << " violations " << r.violations.size();
        EXPECT_EQ(r.checked, u.size());
    }
}

TEST(Young, SandwichRejectsBadInput) {
    std::vector<double> bad{1.0, -1.0};
    EXPECT_THROW(verify_inverse_sandwich(YoungFunction::power(2.0), bad), DomainError);
}

TEST(Young, CertificateAcceptsConvexFamilies) {
    std::vector<double> grid{0.0};
    for (double t : log_grid(1e-4, 1e4, 60)) grid.push_back(t);
    for (const auto& Phi : {YoungFunction::power(1.0), YoungFunction::power(3.0), YoungFunction::flat_then_linear(2.0),
                            YoungFunction::appendix_exp(1)})
        EXPECT_TRUE(certify_young(Phi, grid).pass()) << Phi.label();
}

TEST(Young, CertificateRejectsConcave) {
    std::vector<double> grid{0.0};
    for (double t : log_grid(1e-4, 1e4, 60)) grid.push_back(t);
    YoungCertificate c = certify_young(YoungFunction::power(0.5), grid);
    EXPECT_FALSE(c.convex);
    EXPECT_GT(c.worst_convexity_defect, 0.0);
    EXPECT_FALSE(c.pass());

    auto bounded = YoungFunction::callable([](double t) { return t / (1.0 + t); }, "bounded");
    EXPECT_FALSE(certify_young(bounded, grid).pass());
}

TEST(Young, CertificateGridContract) {
    std::vector<double> no_zero{1.0, 2.0};
    std::vector<double> unsorted{0.0, 2.0, 1.0};
    std::vector<double> empty;
    auto Phi = YoungFunction::power(2.0);
    EXPECT_THROW(certify_young(Phi, no_zero), UsageError);
    EXPECT_THROW(certify_young(Phi, unsorted), UsageError);
    EXPECT_THROW(certify_young(Phi, empty), UsageError);
}

TEST(Young, PiecewiseNeedsOrderedBreakpoints) {
    std::vector<YoungPiece> bad{{0.5, YoungPiece::Form::polynomial, {0.0, 1.0}}};
    EXPECT_THROW(YoungFunction::piecewise(bad), UsageError);
    std::vector<YoungPiece> swapped{{0.0, YoungPiece::Form::polynomial, {0.0, 1.0}},
                                    {2.0, YoungPiece::Form::polynomial, {0.0, 2.0}},
                                    {1.0, YoungPiece::Form::polynomial, {0.0, 3.0}}};
    EXPECT_THROW(YoungFunction::piecewise(swapped), UsageError);
}

TEST(Young, GridHelpers) {
    auto l = linear_grid(0.0, 1.0, 5);
    ASSERT_EQ(l.size(), 5u);
    EXPECT_DOUBLE_EQ(l[2], 0.5);
    auto g = log_grid(1e-2, 1e2, 5);
    EXPECT_NEAR(g[2], 1.0, 1e-12);
    EXPECT_NEAR(g.back(), 1e2, 1e-10);
}
