#include <gtest/gtest.h>

#include "levi/levi.hpp"
#include "levi/serialize.hpp"

using namespace levi;

TEST(Json, Valuations) {
    EXPECT_EQ(to_json(ExtendedQ(ExpQ(3, 2))).dump(), R"({"num":3,"den":2})");
    EXPECT_EQ(to_json(ExtendedQ::infinity()).dump(), R"("inf")");
    EXPECT_EQ(to_json(ExtendedQ::neg_infinity()).dump(), R"("-inf")");
}

TEST(Json, NumbersUseTheLiteralGrammar) {
    EXPECT_EQ(to_json(parse_lc("2 + 3d^(1/2) - d^2")).get<std::string>(), "2 + 3d^(1/2) - d^2");
    EXPECT_EQ(point_json({LcNumber::d()}).dump(), R"("d")");
    EXPECT_EQ(point_json({LcNumber::d(), LcNumber::zero()}).dump(), R"(["d","0"])");
}

TEST(Json, ReportFields) {
    const WludReport r =
        wlud_check_1d(parse_expr("abs(x)"), "x", LcNumber::zero(), 1, LcNumber::constant(1), LcNumber::d());
    const ordered_json j = to_json(r);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) {
        keys.push_back(k);
    }
    EXPECT_EQ(keys, (std::vector<std::string>{"x0", "k", "epsilon", "delta", "samples", "inconclusive", "result",
                                              "worst_pair", "margin", "lhs_all_zero"}));
    EXPECT_EQ(j["result"], "fail");
    EXPECT_TRUE(j["worst_pair"].contains("lhs"));
    EXPECT_EQ(parse_lc(j["worst_pair"]["lhs"].get<std::string>(), r.worst_pair->lhs.horizon()), r.worst_pair->lhs);
}

TEST(Json, CertificateFields) {
    const AnalyticityCertificate c =
        analyticity_certificate_1d(parse_expr("exp(x)"), "x", LcNumber::zero(), 8, 2);
    const ordered_json j = to_json(c);
    for (const char* k : {"x0", "jmax", "kmax", "window", "lambda0", "lambda0_head", "delta_ladder", "t",
                          "required_radius_lambda", "delta", "identity_checks", "verdict", "note"}) {
        EXPECT_TRUE(j.contains(k)) << k;
    }
    EXPECT_EQ(j["verdict"], "certified_at_scale");
    EXPECT_EQ(j["lambda0"].dump(), R"({"num":0,"den":1})");
}

TEST(Json, ByteIdenticalAcrossRuns) {
    const Expr f = parse_expr("sin(x) + x^2");
    const std::string a = to_json(analyticity_certificate_1d(f, "x", LcNumber::zero(), 10, 3)).dump();
    const std::string b = to_json(analyticity_certificate_1d(f, "x", LcNumber::zero(), 10, 3)).dump();
    EXPECT_EQ(a, b);
    const std::string r1 = to_json(wlud_check_1d(f, "x", LcNumber::zero(), 2, LcNumber::constant(1), LcNumber::d())).dump();
    const std::string r2 = to_json(wlud_check_1d(f, "x", LcNumber::zero(), 2, LcNumber::constant(1), LcNumber::d())).dump();
    EXPECT_EQ(r1, r2);
}

TEST(Json, TaylorJet) {
    const TaylorJet jet = taylor_jet(parse_expr("x^2"), "x", LcNumber::constant(3), 2);
    EXPECT_EQ(to_json(jet).dump(), R"({"center":"3","order":2,"coeffs":["9","6","1"]})");
}
