#pragma once

// JSON forms of reports and certificates. Valuations are {"num", "den"}
// or the strings "inf" / "-inf"; numbers use the literal grammar.

#include <string>
#include <vector>

#include "json.hpp"

#include "calculus.hpp"
#include "literal.hpp"
#include "wlud.hpp"

namespace levi {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const ExpQ& q) { return ordered_json{{"num", q.num()}, {"den", q.den()}}; }

inline ordered_json to_json(const ExtendedQ& v) {
    if (v.is_pos_inf()) {
        return "inf";
    }
    if (v.is_neg_inf()) {
        return "-inf";
    }
    return to_json(v.value());
}

inline ordered_json to_json(const LcNumber& x) { return to_literal(x); }

/// A scalar for one coordinate, an array otherwise.
inline ordered_json point_json(const std::vector<LcNumber>& p) {
    if (p.size() == 1) {
        return to_json(p[0]);
    }
    ordered_json a = ordered_json::array();
    for (const auto& c : p) {
        a.push_back(to_json(c));
    }
    return a;
}

inline ordered_json to_json(const WludReport& r) {
    ordered_json j;
    j["x0"] = point_json(r.x0);
    j["k"] = r.k;
    j["epsilon"] = to_json(r.epsilon);
    j["delta"] = to_json(r.delta);
    j["samples"] = r.samples;
    j["inconclusive"] = r.inconclusive;
    j["result"] = to_string(r.result);
    if (r.worst_pair) {
        j["worst_pair"] = {{"x", point_json(r.worst_pair->x)},
                           {"y", point_json(r.worst_pair->y)},
                           {"lhs", to_json(r.worst_pair->lhs)},
                           {"rhs", to_json(r.worst_pair->rhs)}};
    } else {
        j["worst_pair"] = nullptr;
    }
    j["margin"] = to_json(r.margin);
    j["lhs_all_zero"] = r.lhs_all_zero;
    return j;
}

inline ordered_json to_json(const AnalyticityCertificate& c) {
    ordered_json j;
    j["x0"] = point_json(c.x0);
    j["jmax"] = c.jmax;
    j["kmax"] = c.kmax;
    j["window"] = c.window;
    j["lambda0"] = to_json(c.lambda0);
    j["lambda0_head"] = to_json(c.lambda0_head);
    ordered_json ladder = ordered_json::array();
    for (const auto& e : c.delta_ladder) {
        ladder.push_back({{"k", e.k}, {"delta", to_json(e.delta)}, {"lambda", to_json(e.lambda)}});
    }
    j["delta_ladder"] = ladder;
    j["t"] = c.t ? to_json(*c.t) : ordered_json(nullptr);
    j["required_radius_lambda"] = c.required_radius_lambda ? to_json(*c.required_radius_lambda) : ordered_json(nullptr);
    j["delta"] = c.delta ? to_json(*c.delta) : ordered_json(nullptr);
    ordered_json checks = ordered_json::array();
    for (const auto& ic : c.identity_checks) {
        checks.push_back({{"x", point_json(ic.x)},
                          {"y", point_json(ic.y)},
                          {"residual_lambda", to_json(ic.residual_lambda)},
                          {"horizon", to_json(ic.horizon)}});
    }
    j["identity_checks"] = checks;
    j["verdict"] = to_string(c.verdict);
    j["note"] = c.note;
    return j;
}

inline ordered_json to_json(const TaylorJet& jet) {
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : jet.coeffs) {
        coeffs.push_back(to_json(c));
    }
    return {{"center", to_json(jet.center)}, {"order", jet.order()}, {"coeffs", coeffs}};
}

} // namespace levi
