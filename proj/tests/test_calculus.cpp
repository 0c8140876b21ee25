#include <gtest/gtest.h>

#include <cmath>

#include "levi/levi.hpp"
#include "support.hpp"

using namespace levi;
using levi::testing::close;
using levi::testing::factorial;

namespace {

LcNumber c(double v) { return LcNumber::constant(v); }

std::vector<double> reals(const TaylorJet& jet) {
    std::vector<double> out;
    for (const auto& a : jet.coeffs) {
        EXPECT_TRUE(a.is_real());
        out.push_back(a.real_part());
    }
    return out;
}

} // namespace

TEST(TaylorJet, Square) {
    const TaylorJet jet = taylor_jet(parse_expr("x^2"), "x", c(3), 2);
    EXPECT_EQ(reals(jet), (std::vector<double>{9, 6, 1}));
}

TEST(TaylorJet, SineMatchesSymbolicOracle) {
    const Expr f = parse_expr("sin(x)");
    const TaylorJet jet = taylor_jet(f, "x", c(0), 5);
    for (int j = 0; j <= 5; ++j) {
        const double want = levi::testing::symbolic_derivative(f, "x", j, 0.0) / factorial(j);
        EXPECT_NEAR(jet.coeffs[static_cast<std::size_t>(j)].real_part(), want, 1e-15) << j;
    }
}

TEST(TaylorJet, AbsAtZeroSeesOnlyOneSide) {
    // |d| = d, so the real center reports the right-hand slope; at -d the
    // slope flips. The wlud check is what exposes the kink.
    const Expr f = parse_expr("abs(x)");
    EXPECT_EQ(reals(taylor_jet(f, "x", c(0), 2)), (std::vector<double>{0, 1, 0}));
    EXPECT_EQ(taylor_jet(f, "x", -LcNumber::d(Horizon(8)), 2).coeffs[1], c(-1));
    EXPECT_THROW((void)taylor_jet(parse_expr("sqrt(x)"), "x", c(0), 2), non_jet_result);
}

TEST(TaylorJet, CenterHorizonMustCoverOrder) {
    EXPECT_THROW((void)taylor_jet(parse_expr("x"), "x", LcNumber::constant(1.0, Horizon(2)), 4), horizon_exhausted);
}

TEST(TaylorJet, InfinitesimalCenterUsesJetArithmetic) {
    const LcNumber x0 = LcNumber::d(Horizon(32));
    const TaylorJet jet = taylor_jet(parse_expr("x^3"), "x", x0, 3);
    // (d + t)^3 = d^3 + 3d^2 t + 3d t^2 + t^3
    EXPECT_TRUE(agrees_to_horizon(jet.coeffs[0], pow(x0, 3)));
    EXPECT_TRUE(agrees_to_horizon(jet.coeffs[1], LcNumber::monomial(3.0, 2)));
    EXPECT_TRUE(agrees_to_horizon(jet.coeffs[2], LcNumber::monomial(3.0, 1)));
    EXPECT_EQ(jet.coeffs[1].size(), 1U);
    EXPECT_EQ(jet.coeffs[2].size(), 1U);
    EXPECT_EQ(jet.coeffs[3].real_part(), 1.0);
}

TEST(DerivativeAt, Examples) {
    EXPECT_EQ(derivative_at(parse_expr("x^3"), "x", c(1), 2), c(6));
    EXPECT_NEAR(derivative_at(parse_expr("exp(x)"), "x", c(0), 7).real_part(), 1.0, 1e-12);
    // d^4/dx^4 x e^x = (x + 4) e^x.
    const double oracle = (0.0 + 4.0) * std::exp(0.0);
    EXPECT_NEAR(derivative_at(parse_expr("x*exp(x)"), "x", c(0), 4).real_part(), oracle, 1e-12);
}

TEST(DerivativeAt, CorpusAgainstSymbolicOracle) {
    for (const auto& s : levi::testing::derivative_corpus()) {
        const Expr f = parse_expr(s);
        for (double p : {0.0, 0.5}) {
            for (int j = 0; j <= 5; ++j) {
                const double want = levi::testing::symbolic_derivative(f, "x", j, p);
                const double got = derivative_at(f, "x", c(p), j).real_part();
                EXPECT_TRUE(close(got, want, 1e-9, 1e-12)) << s << " j=" << j << " at " << p;
            }
        }
    }
}

TEST(PartialJet, Examples) {
    const PartialJet xy = partial_jet(parse_expr("x*y"), {"x", "y"}, {c(0), c(0)}, 2);
    EXPECT_EQ(xy.table.at({1, 1}), c(1));
    EXPECT_TRUE(xy.table.at({2, 0}).is_zero());
    const PartialJet x2y = partial_jet(parse_expr("x^2*y"), {"x", "y"}, {c(1), c(1)}, 3);
    EXPECT_EQ(x2y.table.at({2, 1}), c(1));
    EXPECT_EQ(x2y.table.at({1, 0}), c(2));
    EXPECT_EQ(x2y.table.at({0, 0}), c(1));
}

TEST(GradedEncoding, DecodeInvertsEncode) {
    for (int n = 1; n <= 4; ++n) {
        for (int k = 0; k <= 5; ++k) {
            const detail::GradedEncoding enc(n, k);
            const JetSpace space(n, k);
            for (std::size_t i = 0; i < space.size(); ++i) {
                ExpQ e = 0;
                for (int v = 0; v < n; ++v) {
                    e = e + ExpQ(space.alpha(i)[static_cast<std::size_t>(v)]) * enc.exponent(v);
                }
                ASSERT_LT(e, ExpQ(k + 1));
                EXPECT_EQ(enc.decode(e), space.alpha(i));
            }
        }
    }
}

// Nested extraction: d^alpha f / alpha! is the coefficient of the
// 1-d jet in x of the 1-d jet in y of the expanded polynomial.
TEST(PartialJet, RandomPolynomialsAgainstNestedExtraction) {
    levi::testing::Rng rng(5);
    const std::vector<std::string> vars{"x", "y", "z"};
    for (int trial = 0; trial < 100; ++trial) {
        const Expr f = levi::testing::random_polynomial(rng, vars, 4);
        const std::vector<double> p{static_cast<double>(levi::testing::uniform(rng, -2, 2)),
                                    static_cast<double>(levi::testing::uniform(rng, -2, 2)),
                                    static_cast<double>(levi::testing::uniform(rng, -2, 2))};
        const PartialJet pj = partial_jet(f, vars, {c(p[0]), c(p[1]), c(p[2])}, 4);
        for (const auto& [alpha, value] : pj.table) {
            Expr g = f;
            for (std::size_t v = 0; v < 3; ++v) {
                for (int r = 0; r < alpha[v]; ++r) {
                    g = diff_symbolic(g, vars[v]);
                }
            }
            const double want = eval_double(g, {{"x", p[0]}, {"y", p[1]}, {"z", p[2]}}) /
                                (factorial(alpha[0]) * factorial(alpha[1]) * factorial(alpha[2]));
            EXPECT_EQ(value.real_part(), want) << to_string(f);
        }
    }
}

TEST(PartialJet, RealAndInfinitesimalRoutesAgree) {
    const Expr f = parse_expr("exp(x)*sin(y) + x^2*y");
    const PartialJet a = partial_jet(f, {"x", "y"}, {c(0.5), c(0.25)}, 4);
    auto space = std::make_shared<const JetSpace>(2, 4);
    const Jet r = eval_jet(f,
                           {{"x", Jet::variable(space, 0, c(0.5))}, {"y", Jet::variable(space, 1, c(0.25))}},
                           space);
    for (const auto& [alpha, value] : a.table) {
        EXPECT_TRUE(close(value.real_part(), r.at(alpha).real_part(), 1e-12, 1e-14));
    }
}

TEST(DirectionalPower, Examples) {
    const LcNumber a = parse_lc("2 + d");
    const LcNumber b = parse_lc("-d^2");
    const PartialJet sum = partial_jet(parse_expr("x + y"), {"x", "y"}, {c(0), c(0)}, 1);
    EXPECT_EQ(directional_power(sum, {a, b}, 1), a + b);
    const PartialJet xy = partial_jet(parse_expr("x*y"), {"x", "y"}, {c(0), c(0)}, 2);
    EXPECT_EQ(directional_power(xy, {c(1), c(1)}, 2), c(2));
    EXPECT_THROW((void)directional_power(xy, {c(1), c(1)}, 3), order_too_high);
}

TEST(DirectionalPower, HomogeneousOfDegreeJ) {
    levi::testing::Rng rng(17);
    const std::vector<std::string> vars{"x", "y"};
    for (int trial = 0; trial < 30; ++trial) {
        const Expr f = levi::testing::random_polynomial(rng, vars, 5);
        const PartialJet pj = partial_jet(f, vars, {c(1), c(-1)}, 5);
        const std::vector<LcNumber> v{levi::testing::random_lc(rng, 3), levi::testing::random_lc(rng, 3)};
        const LcNumber s = parse_lc("3");
        for (int j = 1; j <= 5; ++j) {
            const LcNumber lhs = directional_power(pj, {v[0] * s, v[1] * s}, j);
            const LcNumber rhs = directional_power(pj, v, j) * pow(s, j);
            EXPECT_TRUE(agrees_to_horizon(lhs, rhs, 1e-12, 1e-12));
        }
    }
}

TEST(TaylorPolynomialEval, Examples) {
    const TaylorJet sq = taylor_jet(parse_expr("x^2"), "x", c(0), 2);
    const LcNumber y = parse_lc("1 + d", Horizon::infinity());
    EXPECT_EQ(taylor_polynomial_eval(sq, y, 2), y * y);
    EXPECT_EQ(taylor_polynomial_eval(sq, y, 0), sq.coeffs[0]);
    const TaylorJet e = taylor_jet(parse_expr("exp(x)"), "x", c(0), 3);
    const LcNumber at = taylor_polynomial_eval(e, LcNumber::d(), 3);
    EXPECT_TRUE(agrees_to_horizon(at, parse_lc("1 + d + 0.5d^2 + 0.16666666666666666d^3", Horizon::infinity()), 1e-15,
                                  0.0));
    EXPECT_TRUE(agrees_to_horizon(at, sum_at(e.to_series(), LcNumber::d()).truncated(Horizon(4)), 1e-15, 0.0));
    EXPECT_THROW((void)taylor_polynomial_eval(sq, y, 3), order_too_high);
}

TEST(Lhopital, Examples) {
    EXPECT_EQ(lhopital_limit(parse_expr("x"), parse_expr("x"), "x", c(0)).real_part(), 1.0);
    EXPECT_NEAR(lhopital_limit(parse_expr("sin(x)"), parse_expr("x"), "x", c(0)).real_part(), 1.0, 1e-15);
    EXPECT_NEAR(lhopital_limit(parse_expr("1 - cos(x)"), parse_expr("x^2"), "x", c(0)).real_part(), 0.5, 1e-15);
    EXPECT_NEAR(lhopital_limit(parse_expr("x^2 - 1"), parse_expr("x - 1"), "x", c(1)).real_part(), 2.0, 1e-15);
    EXPECT_TRUE(lhopital_limit(parse_expr("x^2"), parse_expr("x"), "x", c(0)).is_zero());
}

TEST(Lhopital, Errors) {
    EXPECT_THROW((void)lhopital_limit(parse_expr("x + 1"), parse_expr("x"), "x", c(0)), not_indeterminate);
    EXPECT_THROW((void)lhopital_limit(parse_expr("x"), parse_expr("x^2"), "x", c(0)), infinite_limit);
    EXPECT_THROW((void)lhopital_limit(parse_expr("x"), parse_expr("x - x"), "x", c(0)), zero_denominator);
}
