#include <gtest/gtest.h>

#include <cmath>

#include "levi/levi.hpp"
#include "support.hpp"

using namespace levi;

namespace {

const Horizon kInf = Horizon::infinity();

PowerSeries geometric_dinv(int jmax) {
    PowerSeries s{LcNumber::zero(), {}};
    for (int j = 0; j <= jmax; ++j) {
        s.coeffs.push_back(LcNumber::monomial(1.0, -j));
    }
    return s;
}

PowerSeries constant_series(int jmax, double c = 1.0) {
    PowerSeries s{LcNumber::zero(), {}};
    for (int j = 0; j <= jmax; ++j) {
        s.coeffs.push_back(LcNumber::constant(c));
    }
    return s;
}

PowerSeries exp_series(int jmax) {
    PowerSeries s{LcNumber::zero(), {}};
    for (int j = 0; j <= jmax; ++j) {
        s.coeffs.push_back(LcNumber::constant(1.0 / levi::testing::factorial(j)));
    }
    return s;
}

PowerSeries poly(std::vector<double> c, LcNumber center = LcNumber::zero()) {
    PowerSeries s{std::move(center), {}};
    for (double v : c) {
        s.coeffs.push_back(LcNumber::constant(v));
    }
    return s;
}

} // namespace

TEST(Lambda0, Examples) {
    EXPECT_EQ(lambda0_estimate(geometric_dinv(12), 6), ExtendedQ(1));
    EXPECT_EQ(lambda0_estimate(constant_series(12), 6), ExtendedQ(0));
    EXPECT_TRUE(lambda0_estimate(poly({1, 2, 3, 0, 0, 0, 0}), 3).is_neg_inf());
    EXPECT_THROW((void)lambda0_estimate(poly({1}), 1), empty_series);
}

TEST(ConvergesAt, Examples) {
    const PowerSeries s = geometric_dinv(12);
    const ConvergenceVerdict a = converges_at(s, LcNumber::monomial(1.0, 2), 6);
    EXPECT_EQ(a.verdict, Verdict::converges);
    EXPECT_EQ(a.gap, ExtendedQ(1));
    EXPECT_EQ(converges_at(s, LcNumber::d(), 6).verdict, Verdict::boundary);
    EXPECT_EQ(converges_at(s, LcNumber::monomial(1.0, ExpQ(1, 2)), 6).verdict, Verdict::diverges);
    EXPECT_EQ(converges_at(s, s.center, 6).verdict, Verdict::converges);
    EXPECT_EQ(converges_at(constant_series(12), s.center, 6).verdict, Verdict::converges);
}

TEST(SumAt, PolynomialJet) {
    // Jet of x^2 at 0 carried to order 4 so the window sees the zero tail.
    const PowerSeries s = poly({0, 0, 1, 0, 0});
    const LcNumber x = parse_lc("1 + d", kInf);
    EXPECT_EQ(sum_at(s, x), parse_lc("1 + 2d + d^2", kInf));
    EXPECT_EQ(sum_at(s, s.center), s.coeffs[0]);
}

TEST(SumAt, GeometricSeriesInvertsOneMinusD) {
    const LcNumber r = sum_at(constant_series(24), LcNumber::d());
    EXPECT_EQ(r.horizon(), Horizon(25));
    const LcNumber back = r * parse_lc("1 - d", kInf);
    EXPECT_EQ(back, LcNumber::constant(1.0, Horizon(25)));
}

TEST(SumAt, RejectsPointsOutsideTheDisc) {
    EXPECT_THROW((void)sum_at(geometric_dinv(10), LcNumber::d()), not_convergent);
}

TEST(DifferentiateTermwise, Examples) {
    const PowerSeries d1 = differentiate_termwise(poly({0, 0, 0, 1}), 1);
    EXPECT_EQ(d1.coeffs, poly({0, 0, 3}).coeffs);
    const PowerSeries e = differentiate_termwise(exp_series(10), 1);
    // d/dx sum x^l / l! has coefficients l / l! = 1/(l-1)!.
    for (std::size_t j = 0; j < e.coeffs.size(); ++j) {
        EXPECT_NEAR(e.coeffs[j].real_part(), 1.0 / levi::testing::factorial(static_cast<int>(j)), 1e-15);
    }
    EXPECT_THROW((void)differentiate_termwise(poly({1, 2}), 2), order_too_high);
}

TEST(Recenter, Examples) {
    // Zero padding beyond the degree lets the window see a polynomial.
    const PowerSeries sq = poly({0, 0, 1, 0, 0});
    const PowerSeries r = recenter(sq, LcNumber::constant(1.0), 2);
    EXPECT_EQ(r.coeffs, poly({1, 2, 1, 0, 0}).coeffs);
    EXPECT_EQ(recenter(sq, LcNumber::zero(), 2).coeffs, sq.coeffs);
}

TEST(Recenter, ExpAtDScalesByExpD) {
    const PowerSeries s = exp_series(20);
    const LcNumber c = LcNumber::d(Horizon(32));
    const PowerSeries r = recenter(s, c, default_window(20));
    const LcNumber ed = apply_elementary(Elementary::exp, c);
    for (std::size_t j = 0; j < 6; ++j) {
        const LcNumber expect = ed.scaled(1.0 / levi::testing::factorial(static_cast<int>(j)));
        EXPECT_TRUE(agrees_to_horizon(r.coeffs[j], expect, 1e-12, 1e-15)) << j;
    }
    // Evaluations of both expansions agree at sampled points near d.
    for (const char* y : {"d + d^2", "d - 3d^(3/2)", "2d"}) {
        const LcNumber p = parse_lc(y, Horizon(32));
        EXPECT_TRUE(agrees_to_horizon(sum_at(s, p), sum_at(r, p), 1e-12, 1e-15)) << y;
    }
}

TEST(Recenter, CommutesWithDifferentiation) {
    levi::testing::Rng rng(31);
    for (int i = 0; i < 40; ++i) {
        std::vector<double> c;
        for (int j = 0; j <= 8; ++j) {
            c.push_back(static_cast<double>(levi::testing::uniform(rng, -9, 9)));
        }
        c.insert(c.end(), 9, 0.0);
        const PowerSeries s = poly(c);
        const LcNumber to = LcNumber::constant(static_cast<double>(levi::testing::uniform(rng, -3, 3)));
        const PowerSeries a = differentiate_termwise(recenter(s, to, 8), 1);
        const PowerSeries b = recenter(differentiate_termwise(s, 1), to, 8);
        EXPECT_EQ(a.coeffs, b.coeffs);
    }
}

TEST(Recenter, OutsideRadiusThrows) {
    EXPECT_THROW((void)recenter(geometric_dinv(10), LcNumber::d(), 5), not_in_radius);
}

TEST(Elementary, ExpIdentities) {
    EXPECT_EQ(apply_elementary(Elementary::exp, LcNumber::zero()), LcNumber::constant(1.0));
    const LcNumber ep = apply_elementary(Elementary::exp, LcNumber::d(Horizon(20)));
    const LcNumber em = apply_elementary(Elementary::exp, -LcNumber::d(Horizon(20)));
    EXPECT_EQ(ep.coeff_at(3), 1.0 / 6.0);
    EXPECT_TRUE(agrees_to_horizon(ep * em, LcNumber::constant(1.0, Horizon(20)), 0.0, 1e-15));
    const LcNumber e1 = apply_elementary(Elementary::exp, parse_lc("1 + d", Horizon(20)));
    EXPECT_NEAR(e1.real_part(), std::exp(1.0), 1e-15);
    EXPECT_NEAR(e1.coeff_at(2), std::exp(1.0) / 2, 1e-15);
}

TEST(Elementary, LnRoundTrip) {
    const LcNumber x = parse_lc("1 + d", Horizon(20));
    const LcNumber l = apply_elementary(Elementary::ln, x);
    EXPECT_EQ(l.coeff_at(1), 1.0);
    EXPECT_EQ(l.coeff_at(2), -0.5);
    EXPECT_TRUE(agrees_to_horizon(apply_elementary(Elementary::exp, l), x, 1e-14, 1e-15));
    EXPECT_THROW((void)apply_elementary(Elementary::ln, parse_lc("-1 + d")), levi::domain_error);
    EXPECT_THROW((void)apply_elementary(Elementary::ln, LcNumber::zero()), levi::error);
}

TEST(Elementary, SinCosPythagoras) {
    for (const char* s : {"d", "0.3 + d", "-2 + d^(1/2)"}) {
        const LcNumber x = parse_lc(s, Horizon(16));
        const LcNumber sn = apply_elementary(Elementary::sin, x);
        const LcNumber cs = apply_elementary(Elementary::cos, x);
        EXPECT_TRUE(agrees_to_horizon(sn * sn + cs * cs, LcNumber::constant(1.0, Horizon(16)), 1e-14, 1e-14)) << s;
    }
}

TEST(NthRoot, Examples) {
    EXPECT_TRUE(agrees_to_horizon(nth_root(parse_lc("d^2"), 2), LcNumber::d()));
    EXPECT_EQ(nth_root(parse_lc("d^2"), 2).size(), 1U);
    EXPECT_EQ(nth_root(LcNumber::constant(4.0), 2), LcNumber::constant(2.0));
    const LcNumber x = parse_lc("1 + d", Horizon(20));
    const LcNumber r = nth_root(x, 2);
    EXPECT_EQ(r.coeff_at(1), 0.5);
    EXPECT_EQ(r.coeff_at(2), -0.125);
    EXPECT_TRUE(agrees_to_horizon(r * r, x, 1e-14, 1e-15));
    EXPECT_THROW((void)nth_root(parse_lc("-4"), 2), levi::not_positive);
}
