#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "literal.hpp"
#include "number.hpp"

namespace levi {

/// Truncated power series sum_{j<=jmax} a_j (x - center)^j with
/// Levi-Civita coefficients. Each coefficient keeps its own horizon.
struct PowerSeries {
    LcNumber center;
    std::vector<LcNumber> coeffs;

    [[nodiscard]] std::int64_t jmax() const { return static_cast<std::int64_t>(coeffs.size()) - 1; }
};

enum class Verdict { converges, diverges, boundary };

struct ConvergenceVerdict {
    Verdict verdict = Verdict::diverges;
    /// Surrogate for limsup_j (-lambda(a_j) / j); -inf when the window is all zeros.
    ExtendedQ lambda0;
    /// lambda(x - center) - lambda0.
    ExtendedQ gap;
};

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::converges:
        return "converges";
    case Verdict::boundary:
        return "boundary";
    default:
        return "diverges";
    }
}

/// Trailing window used when the caller does not pick one: the last half of
/// the indices 1..jmax, rounded up.
inline std::int64_t default_window(std::int64_t jmax) { return jmax < 1 ? 1 : (jmax + 1) / 2; }

/// max over the last `window` indices j of -lambda(a_j) / j. Zero
/// coefficients contribute -inf.
inline ExtendedQ lambda0_estimate(const PowerSeries& s, std::int64_t window) {
    const std::int64_t jmax = s.jmax();
    if (jmax < 1) {
        throw empty_series("lambda0 needs at least the coefficients a_0 and a_1");
    }
    if (window < 1 || window > jmax) {
        throw std::invalid_argument("window must lie in [1, jmax]");
    }
    ExtendedQ best = ExtendedQ::neg_infinity();
    for (std::int64_t j = jmax - window + 1; j <= jmax; ++j) {
        const LcNumber& a = s.coeffs[static_cast<std::size_t>(j)];
        if (a.is_zero()) {
            continue;
        }
        best = max(best, ExtendedQ(-a.lambda().value() / ExpQ(j)));
    }
    return best;
}

inline ConvergenceVerdict converges_at(const PowerSeries& s, const LcNumber& x, std::int64_t window) {
    ConvergenceVerdict v;
    v.lambda0 = lambda0_estimate(s, window);
    v.gap = (x - s.center).lambda() - v.lambda0;
    if (v.gap > ExtendedQ(0)) {
        v.verdict = Verdict::converges;
    } else if (v.gap == ExtendedQ(0)) {
        v.verdict = Verdict::boundary;
    } else {
        v.verdict = Verdict::diverges;
    }
    return v;
}

namespace detail {

/// Lower bound on lambda of the omitted tail sum_{l>jmax} a_l h^l, using
/// lambda(a_l) >= -lambda0 * l. Infinite when the tail estimate is -inf or h = 0.
inline Horizon truncation_horizon(std::int64_t jmax, const ExtendedQ& lambda0, const Valuation& lambda_h) {
    if (lambda0.is_neg_inf() || lambda_h.is_pos_inf()) {
        return Horizon::infinity();
    }
    return Horizon(ExpQ(jmax + 1) * (lambda_h.value() - lambda0.value()));
}

inline double falling_factorial(std::int64_t l, std::int64_t j) {
    double r = 1.0;
    for (std::int64_t i = 0; i < j; ++i) {
        r *= static_cast<double>(l - i);
    }
    return r;
}

inline double binomial(std::int64_t l, std::int64_t j) {
    double r = 1.0;
    for (std::int64_t i = 1; i <= j; ++i) {
        r = r * static_cast<double>(l - j + i) / static_cast<double>(i);
    }
    return std::round(r);
}

} // namespace detail

/// Evaluates the series at x. The result horizon also accounts for the
/// omitted tail beyond jmax, estimated from the default window.
inline LcNumber sum_at(const PowerSeries& s, const LcNumber& x) {
    const LcNumber h = x - s.center;
    const std::int64_t jmax = s.jmax();
    Horizon cap = Horizon::infinity();
    if (jmax >= 1) {
        const ConvergenceVerdict v = converges_at(s, x, default_window(jmax));
        if (v.verdict != Verdict::converges) {
            throw not_convergent(std::string("series does not converge at the point (") + to_string(v.verdict) +
                                 ", gap " + v.gap.str() + ")");
        }
        cap = detail::truncation_horizon(jmax, v.lambda0, h.lambda());
    }
    if (s.coeffs.empty()) {
        return LcNumber::zero(cap);
    }
    LcNumber acc = s.coeffs[0].truncated(cap);
    // Powers are kept only as far as any coefficient can pull them below the
    // running horizon.
    ExtendedQ slack = ExtendedQ(0);
    for (const auto& a : s.coeffs) {
        if (!a.is_zero()) {
            slack = min(slack, a.lambda());
        }
    }
    LcNumber power = LcNumber::constant(1.0);
    int invisible = 0;
    for (std::int64_t j = 1; j <= jmax && invisible < 10; ++j) {
        power = (power * h).truncated(acc.horizon() - slack);
        invisible = power.is_zero() ? invisible + 1 : 0;
        acc += s.coeffs[static_cast<std::size_t>(j)] * power;
    }
    return acc;
}

/// b_{l-j} = l (l-1) ... (l-j+1) a_l; same center.
inline PowerSeries differentiate_termwise(const PowerSeries& s, std::int64_t j) {
    if (j < 1) {
        throw std::invalid_argument("differentiation order must be positive");
    }
    if (j > s.jmax()) {
        throw order_too_high("termwise derivative of order " + std::to_string(j) + " exceeds jmax " +
                             std::to_string(s.jmax()));
    }
    PowerSeries r;
    r.center = s.center;
    for (std::int64_t l = j; l <= s.jmax(); ++l) {
        r.coeffs.push_back(s.coeffs[static_cast<std::size_t>(l)].scaled(detail::falling_factorial(l, j)));
    }
    return r;
}

/// Re-expands the series about new_center by interchanging the double sum:
/// c_j = sum_{l>=j} C(l, j) a_l (new_center - center)^{l-j}, l <= jmax.
inline PowerSeries recenter(const PowerSeries& s, const LcNumber& new_center, std::int64_t window) {
    const LcNumber h = new_center - s.center;
    const std::int64_t jmax = s.jmax();
    PowerSeries r;
    r.center = new_center;
    if (h.is_exact_zero() || jmax < 1) {
        r.coeffs = s.coeffs;
        return r;
    }
    const ExtendedQ lambda0 = lambda0_estimate(s, window);
    if (!(lambda0 < h.lambda())) {
        throw not_in_radius("lambda(new_center - center) = " + h.lambda().str() +
                            " does not exceed lambda0 = " + lambda0.str());
    }
    ExtendedQ slack = ExtendedQ(0);
    for (const auto& a : s.coeffs) {
        if (!a.is_zero()) {
            slack = min(slack, a.lambda());
        }
    }
    std::vector<LcNumber> powers{LcNumber::constant(1.0)};
    for (std::int64_t i = 1; i <= jmax; ++i) {
        powers.push_back((powers.back() * h).truncated(h.horizon() - slack));
    }
    for (std::int64_t j = 0; j <= jmax; ++j) {
        Horizon cap = Horizon::infinity();
        if (!lambda0.is_neg_inf() && !h.is_zero()) {
            const ExpQ lh = h.lambda().value();
            cap = Horizon(ExpQ(jmax + 1) * (lh - lambda0.value()) - ExpQ(j) * lh);
        }
        LcNumber c = LcNumber::zero();
        for (std::int64_t l = j; l <= jmax; ++l) {
            c += (s.coeffs[static_cast<std::size_t>(l)] * powers[static_cast<std::size_t>(l - j)])
                     .scaled(detail::binomial(l, j));
        }
        r.coeffs.push_back(c.truncated(cap));
    }
    return r;
}

enum class Elementary { exp, ln, sin, cos };

inline const char* to_string(Elementary e) {
    switch (e) {
    case Elementary::exp:
        return "exp";
    case Elementary::ln:
        return "ln";
    case Elementary::sin:
        return "sin";
    default:
        return "cos";
    }
}

namespace detail {

inline double inv_factorial(std::int64_t j) {
    double r = 1.0;
    for (std::int64_t i = 2; i <= j; ++i) {
        r /= static_cast<double>(i);
    }
    return r;
}

} // namespace detail

inline LcNumber apply_elementary(Elementary name, const LcNumber& x) {
    const Horizon h = x.horizon();
    if (name == Elementary::ln) {
        if (x.is_zero() || x.lambda() != Valuation(0) || !(x.leading().coeff > 0.0)) {
            throw domain_error("ln needs a positive argument with a nonzero finite real part");
        }
        const double a0 = x.leading().coeff;
        const LcNumber u = x.divided(a0) - LcNumber::constant(1.0);
        LcNumber series = detail::sum_power_series(u, [](std::int64_t j) {
            if (j == 0) {
                return 0.0;
            }
            return (j % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(j);
        });
        return series + LcNumber::constant(std::log(a0));
    }

    if (!x.is_zero() && x.lambda() < Valuation(0)) {
        throw domain_error(std::string(to_string(name)) + " of an infinitely large argument");
    }
    const double r = x.real_part();
    const LcNumber i = x - LcNumber::constant(r);
    if (i.is_zero()) {
        switch (name) {
        case Elementary::exp:
            return LcNumber::constant(std::exp(r), h);
        case Elementary::sin:
            return LcNumber::constant(std::sin(r), h);
        default:
            return LcNumber::constant(std::cos(r), h);
        }
    }
    if (name == Elementary::exp) {
        return detail::sum_power_series(i, detail::inv_factorial).scaled(std::exp(r));
    }
    const LcNumber sin_i = detail::sum_power_series(i, [](std::int64_t j) {
        return j % 2 == 0 ? 0.0 : ((j / 2) % 2 == 0 ? 1.0 : -1.0) * detail::inv_factorial(j);
    });
    const LcNumber cos_i = detail::sum_power_series(i, [](std::int64_t j) {
        return j % 2 == 1 ? 0.0 : ((j / 2) % 2 == 0 ? 1.0 : -1.0) * detail::inv_factorial(j);
    });
    if (name == Elementary::sin) {
        return cos_i.scaled(std::sin(r)) + sin_i.scaled(std::cos(r));
    }
    return cos_i.scaled(std::cos(r)) - sin_i.scaled(std::sin(r));
}

/// Positive n-th root: root of the leading term times the binomial series
/// of (1 + u)^(1/n).
inline LcNumber nth_root(const LcNumber& x, std::int64_t n) {
    if (n < 1) {
        throw std::invalid_argument("root order must be positive");
    }
    if (compare(x, LcNumber::zero()) != Ordering::greater) {
        throw not_positive("root of a number that is not positive at its horizon");
    }
    if (n == 1) {
        return x;
    }
    const Term lead = x.leading();
    const LcNumber u = x.shifted(-lead.exp).divided(lead.coeff) - LcNumber::constant(1.0);
    const double alpha = 1.0 / static_cast<double>(n);
    const LcNumber series = detail::sum_power_series(u, [alpha](std::int64_t j) {
        double c = 1.0;
        for (std::int64_t i = 0; i < j; ++i) {
            c *= (alpha - static_cast<double>(i)) / static_cast<double>(i + 1);
        }
        return c;
    });
    const double root = n == 2 ? std::sqrt(lead.coeff) : (n == 3 ? std::cbrt(lead.coeff) : std::pow(lead.coeff, alpha));
    return series.shifted(lead.exp / ExpQ(n)).scaled(root);
}

/// "a_0 + a_1*(x-c) + ..." with every coefficient in the literal grammar.
inline std::string to_string(const PowerSeries& s, const std::string& var = "x") {
    std::string base = s.center.is_zero() ? var : "(" + var + " - (" + to_literal(s.center) + "))";
    std::string out;
    for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
        if (j > 0) {
            out += " + ";
        }
        out += "(" + to_literal(s.coeffs[j]) + ")";
        if (j >= 1) {
            out += "*" + base;
        }
        if (j >= 2) {
            out += "^" + std::to_string(j);
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace levi
