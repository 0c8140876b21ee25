#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "jet.hpp"
#include "number.hpp"
#include "series.hpp"

namespace levi {

/// c_j = f^(j)(x0) / j! for j = 0..order.
struct TaylorJet {
    LcNumber center;
    std::vector<LcNumber> coeffs;

    [[nodiscard]] std::int64_t order() const { return static_cast<std::int64_t>(coeffs.size()) - 1; }
    [[nodiscard]] PowerSeries to_series() const { return {center, coeffs}; }
};

/// Table alpha -> d^alpha f(x0) / alpha! for every |alpha| <= order.
struct PartialJet {
    std::vector<LcNumber> center;
    int order = 0;
    std::map<MultiIndex, LcNumber> table;

    [[nodiscard]] int vars() const { return static_cast<int>(center.size()); }
};

namespace detail {

inline constexpr int kHorizonRetries = 6;

inline double factorial(std::int64_t j) {
    double r = 1.0;
    for (std::int64_t i = 2; i <= j; ++i) {
        r *= static_cast<double>(i);
    }
    return r;
}

inline void require_center_horizon(const LcNumber& x0, std::int64_t k) {
    if (x0.horizon() < Horizon(ExpQ(k + 1))) {
        throw horizon_exhausted("center horizon " + x0.horizon().str() + " cannot support jet order " +
                                std::to_string(k));
    }
}

/// Evaluates `eval(H)` with growing input horizon H until the result is
/// known up to `need`.
template <class Eval>
LcNumber evaluate_to(const Horizon& need, Eval eval) {
    ExpQ h = need.value();
    LcNumber r = eval(Horizon(h));
    for (int attempt = 0; r.horizon() < need; ++attempt) {
        if (attempt == kHorizonRetries) {
            throw horizon_exhausted("result horizon " + r.horizon().str() + " stays below " + need.str());
        }
        const ExpQ shortfall = r.horizon().is_finite() ? need.value() - r.horizon().value() : ExpQ(0);
        h = h + need.value() + (shortfall < ExpQ(0) ? ExpQ(0) : shortfall);
        r = eval(Horizon(h));
    }
    return r.truncated(need);
}

inline bool all_real(const std::vector<LcNumber>& xs) {
    for (const auto& x : xs) {
        if (!x.is_real()) {
            return false;
        }
    }
    return true;
}

inline TaylorJet taylor_jet_by_jets(const Expr& f, const std::string& var, const LcNumber& x0, std::int64_t k) {
    auto space = std::make_shared<const JetSpace>(1, static_cast<int>(k));
    const Jet r = eval_jet(f, {{var, Jet::variable(space, 0, x0)}}, space);
    TaylorJet jet{x0, {}};
    for (std::size_t j = 0; j < space->size(); ++j) {
        jet.coeffs.push_back(r[j]);
    }
    return jet;
}

} // namespace detail

/// Jet of f at x0. Real centers evaluate f(x0 + d); centers with
/// infinitesimal parts go through truncated Taylor arithmetic, because
/// shifting by d would mix the center's own terms into the jet.
inline TaylorJet taylor_jet(const Expr& f, const std::string& var, const LcNumber& x0, std::int64_t k) {
    if (k < 0) {
        throw std::invalid_argument("jet order must be nonnegative");
    }
    detail::require_center_horizon(x0, k);
    if (!x0.is_real()) {
        return detail::taylor_jet_by_jets(f, var, x0, k);
    }
    const Horizon need(ExpQ(k + 1));
    const LcNumber r = detail::evaluate_to(need, [&](const Horizon& h) {
        const LcNumber x = LcNumber::normalize({{0, x0.real_part()}, {1, 1.0}}, h);
        return eval_lc(f, {{var, x}});
    });
    TaylorJet jet{x0, std::vector<LcNumber>(static_cast<std::size_t>(k) + 1, LcNumber::zero())};
    for (const auto& t : r.terms()) {
        if (!t.exp.is_integer() || t.exp < ExpQ(0)) {
            throw non_jet_result("evaluation at x0 + d produced the exponent " + t.exp.str());
        }
        jet.coeffs[static_cast<std::size_t>(t.exp.num())] = LcNumber::constant(t.coeff);
    }
    return jet;
}

inline LcNumber derivative_at(const Expr& f, const std::string& var, const LcNumber& x0, std::int64_t j) {
    const TaylorJet jet = taylor_jet(f, var, x0, j);
    return jet.coeffs.back().scaled(detail::factorial(j));
}

namespace detail {

/// Graded exponents: variable 1 gets d, variable i >= 2 gets
/// d^(1 + (k+1)^(i-2) / M) with M = (k+1)^(n-1). A monomial t^alpha then
/// lands on d^(|alpha| + code/M), where code holds alpha_2..alpha_n as
/// base-(k+1) digits, so every |alpha| <= k has its own exponent below k+1.
struct GradedEncoding {
    int n;
    int k;
    std::int64_t base;
    std::int64_t modulus;

    GradedEncoding(int n_, int k_) : n(n_), k(k_), base(k_ + 1), modulus(1) {
        for (int i = 1; i < n; ++i) {
            if (__builtin_mul_overflow(modulus, base, &modulus)) {
                throw std::overflow_error("partial jet encoding overflows");
            }
        }
    }
    [[nodiscard]] ExpQ exponent(int i) const {
        if (i == 0) {
            return 1;
        }
        std::int64_t p = 1;
        for (int j = 1; j < i; ++j) {
            p *= base;
        }
        return ExpQ(1) + ExpQ(p, modulus);
    }
    /// Inverse of the encoding, or nullopt for exponents no monomial maps to.
    [[nodiscard]] std::optional<MultiIndex> decode(const ExpQ& e) const {
        if (e < ExpQ(0) || modulus % e.den() != 0) {
            return std::nullopt;
        }
        const std::int64_t deg = e.floor();
        std::int64_t code = ((e - ExpQ(deg)) * ExpQ(modulus)).num();
        MultiIndex a(static_cast<std::size_t>(n), 0);
        std::int64_t rest = deg;
        for (int i = 1; i < n; ++i) {
            a[static_cast<std::size_t>(i)] = static_cast<int>(code % base);
            code /= base;
            rest -= a[static_cast<std::size_t>(i)];
        }
        if (rest < 0) {
            return std::nullopt;
        }
        a[0] = static_cast<int>(rest);
        return a;
    }
};

inline void check_vars(const std::vector<std::string>& vars, const std::vector<LcNumber>& x0) {
    if (vars.empty() || vars.size() != x0.size()) {
        throw std::invalid_argument("need one center coordinate per variable");
    }
}

} // namespace detail

inline PartialJet partial_jet(const Expr& f, const std::vector<std::string>& vars, const std::vector<LcNumber>& x0,
                              int k) {
    detail::check_vars(vars, x0);
    if (k < 0) {
        throw std::invalid_argument("jet order must be nonnegative");
    }
    for (const auto& x : x0) {
        detail::require_center_horizon(x, k);
    }
    const int n = static_cast<int>(vars.size());
    auto space = std::make_shared<const JetSpace>(n, k);
    PartialJet pj{x0, k, {}};

    if (!detail::all_real(x0)) {
        JetEnv env;
        for (int i = 0; i < n; ++i) {
            env.insert_or_assign(vars[static_cast<std::size_t>(i)],
                                 Jet::variable(space, i, x0[static_cast<std::size_t>(i)]));
        }
        const Jet r = eval_jet(f, env, space);
        for (std::size_t i = 0; i < space->size(); ++i) {
            pj.table.emplace(space->alpha(i), r[i]);
        }
        return pj;
    }

    const detail::GradedEncoding enc(n, k);
    const Horizon need(ExpQ(k + 1));
    const LcNumber r = detail::evaluate_to(need, [&](const Horizon& h) {
        LcEnv env;
        for (int i = 0; i < n; ++i) {
            env.insert_or_assign(vars[static_cast<std::size_t>(i)],
                                 LcNumber::normalize({{0, x0[static_cast<std::size_t>(i)].real_part()},
                                                      {enc.exponent(i), 1.0}},
                                                     h));
        }
        return eval_lc(f, env);
    });
    for (std::size_t i = 0; i < space->size(); ++i) {
        pj.table.emplace(space->alpha(i), LcNumber::zero());
    }
    for (const auto& t : r.terms()) {
        const auto a = enc.decode(t.exp);
        if (!a) {
            throw non_jet_result("evaluation produced the exponent " + t.exp.str() +
                                 ", which encodes no multi-index");
        }
        pj.table.at(*a) = LcNumber::constant(t.coeff);
    }
    return pj;
}

/// [(v . grad)^j f](x0) = j! sum_{|alpha| = j} table(alpha) v^alpha.
inline LcNumber directional_power(const PartialJet& pj, const std::vector<LcNumber>& v, int j) {
    if (j > pj.order) {
        throw order_too_high("directional power of order " + std::to_string(j) + " exceeds jet order " +
                             std::to_string(pj.order));
    }
    if (static_cast<int>(v.size()) != pj.vars()) {
        throw std::invalid_argument("direction has the wrong dimension");
    }
    LcNumber sum = LcNumber::zero();
    for (const auto& [alpha, c] : pj.table) {
        int deg = 0;
        for (int a : alpha) {
            deg += a;
        }
        if (deg != j || c.is_exact_zero()) {
            continue;
        }
        LcNumber term = c;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] > 0) {
                term *= pow(v[i], alpha[i]);
            }
        }
        sum += term;
    }
    return sum.scaled(detail::factorial(j));
}

/// sum_{j<=k} c_j (y - x0)^j.
inline LcNumber taylor_polynomial_eval(const TaylorJet& jet, const LcNumber& y, std::int64_t k) {
    if (k > jet.order()) {
        throw order_too_high("Taylor polynomial of degree " + std::to_string(k) + " exceeds jet order " +
                             std::to_string(jet.order()));
    }
    if (k < 0) {
        throw std::invalid_argument("degree must be nonnegative");
    }
    const LcNumber h = y - jet.center;
    LcNumber acc = jet.coeffs[static_cast<std::size_t>(k)];
    for (std::int64_t j = k; j-- > 0;) {
        acc = acc * h + jet.coeffs[static_cast<std::size_t>(j)];
    }
    return acc;
}

/// lim_{x->a} f(x)/g(x) for a 0/0 form, read off f(a+d)/g(a+d).
inline LcNumber lhopital_limit(const Expr& f, const Expr& g, const std::string& var, const LcNumber& a) {
    if (!eval_lc(f, {{var, a}}).is_zero() || !eval_lc(g, {{var, a}}).is_zero()) {
        throw not_indeterminate("f(a) and g(a) are not both zero at the horizon");
    }
    const LcNumber at = a + LcNumber::d(a.horizon());
    const LcNumber gd = eval_lc(g, {{var, at}});
    if (gd.is_zero()) {
        throw zero_denominator("g(a + d) vanishes at the horizon");
    }
    const LcNumber q = eval_lc(f, {{var, at}}) / gd;
    const Valuation l = q.lambda();
    if (l < Valuation(0)) {
        throw infinite_limit("f/g grows like d^" + l.str());
    }
    if (Valuation(0) < l) {
        return LcNumber::zero(q.horizon());
    }
    return LcNumber::constant(q.real_part(), q.horizon());
}

} // namespace levi
