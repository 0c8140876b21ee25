#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace levi {

/// Default knowledge horizon (as an exponent of d) for numbers built from
/// literals, and the relative truncation budget used when a series has to be
/// summed for an operand that carries no horizon of its own.
inline constexpr std::int64_t kDefaultHorizon = 32;

struct Term {
    ExpQ exp;
    double coeff = 0.0;

    friend bool operator==(const Term&, const Term&) = default;
};

enum class Ordering { less, equal_at_horizon, greater };

/// A truncated Levi-Civita number: finitely many terms a_q d^q with strictly
/// increasing rational exponents, nonzero coefficients, and every exponent
/// strictly below the horizon. Nothing is known about the number at or above
/// the horizon. The exact zero has no terms and an infinite horizon.
class LcNumber {
  public:
    LcNumber() = default;

    static LcNumber zero(Horizon h = Horizon::infinity()) {
        LcNumber r;
        r.horizon_ = h;
        return r;
    }
    static LcNumber constant(double c, Horizon h = Horizon::infinity()) { return monomial(c, 0, h); }
    static LcNumber monomial(double c, ExpQ e, Horizon h = Horizon::infinity()) {
        LcNumber r;
        r.horizon_ = h;
        if (c != 0.0 && Horizon(e) < h) {
            r.terms_.push_back({e, c});
        }
        return r;
    }
    /// The canonical positive infinitesimal.
    static LcNumber d(Horizon h = Horizon::infinity()) { return monomial(1.0, 1, h); }

    /// Sorts by exponent, merges equal exponents, drops exact zeros and
    /// clips everything at or above the horizon.
    static LcNumber normalize(std::vector<Term> raw, Horizon h) {
        std::stable_sort(raw.begin(), raw.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
        LcNumber r;
        r.horizon_ = h;
        r.terms_.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size();) {
            const ExpQ e = raw[i].exp;
            if (!(Horizon(e) < h)) {
                break;
            }
            double c = 0.0;
            for (; i < raw.size() && raw[i].exp == e; ++i) {
                c += raw[i].coeff;
            }
            if (c != 0.0) {
                r.terms_.push_back({e, c});
            }
        }
        return r;
    }

    [[nodiscard]] std::span<const Term> terms() const { return terms_; }
    [[nodiscard]] const Horizon& horizon() const { return horizon_; }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    /// True when no term is visible below the horizon.
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] bool is_exact_zero() const { return terms_.empty() && horizon_.is_pos_inf(); }

    [[nodiscard]] Valuation lambda() const {
        return terms_.empty() ? Valuation::infinity() : Valuation(terms_.front().exp);
    }
    [[nodiscard]] const Term& leading() const {
        if (terms_.empty()) {
            throw zero_operand();
        }
        return terms_.front();
    }
    [[nodiscard]] double coeff_at(const ExpQ& e) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const Term& t, const ExpQ& v) { return t.exp < v; });
        return (it != terms_.end() && it->exp == e) ? it->coeff : 0.0;
    }
    /// Coefficient of d^0.
    [[nodiscard]] double real_part() const { return coeff_at(0); }
    /// True when every term has exponent 0, i.e. the number is a real.
    [[nodiscard]] bool is_real() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exp == 0); }

    /// Same number with the horizon lowered to min(horizon, h).
    [[nodiscard]] LcNumber truncated(const Horizon& h) const {
        if (!(h < horizon_)) {
            return *this;
        }
        LcNumber r;
        r.horizon_ = h;
        for (const auto& t : terms_) {
            if (!(Horizon(t.exp) < h)) {
                break;
            }
            r.terms_.push_back(t);
        }
        return r;
    }
    /// Same terms with a different horizon; terms at or above it are dropped.
    [[nodiscard]] LcNumber with_horizon(const Horizon& h) const {
        LcNumber r = truncated(h);
        r.horizon_ = h;
        return r;
    }

    /// Part of the number with exponents strictly below / at-or-above `e`.
    [[nodiscard]] std::pair<LcNumber, LcNumber> split_at(const ExpQ& e) const {
        LcNumber lo;
        LcNumber hi;
        lo.horizon_ = Horizon::infinity();
        hi.horizon_ = horizon_;
        for (const auto& t : terms_) {
            (t.exp < e ? lo : hi).terms_.push_back(t);
        }
        return {lo, hi};
    }

    [[nodiscard]] LcNumber scaled(double c) const {
        if (c == 0.0) {
            return zero();
        }
        LcNumber r = *this;
        for (auto& t : r.terms_) {
            t.coeff *= c;
        }
        std::erase_if(r.terms_, [](const Term& t) { return t.coeff == 0.0; });
        return r;
    }
    /// Divides every coefficient by c, which keeps exact quotients exact.
    [[nodiscard]] LcNumber divided(double c) const {
        LcNumber r = *this;
        for (auto& t : r.terms_) {
            t.coeff /= c;
        }
        std::erase_if(r.terms_, [](const Term& t) { return t.coeff == 0.0; });
        return r;
    }
    /// Multiplies by d^e; shifts the horizon with it.
    [[nodiscard]] LcNumber shifted(const ExpQ& e) const {
        LcNumber r = *this;
        for (auto& t : r.terms_) {
            t.exp += e;
        }
        r.horizon_ = horizon_ + Horizon(e);
        return r;
    }

    friend LcNumber operator-(const LcNumber& x) {
        LcNumber r = x;
        for (auto& t : r.terms_) {
            t.coeff = -t.coeff;
        }
        return r;
    }

    friend LcNumber operator+(const LcNumber& x, const LcNumber& y) { return add(x, y, 1.0); }
    friend LcNumber operator-(const LcNumber& x, const LcNumber& y) { return add(x, y, -1.0); }
    friend LcNumber operator*(const LcNumber& x, const LcNumber& y) { return multiply(x, y); }
    LcNumber& operator+=(const LcNumber& o) { return *this = *this + o; }
    LcNumber& operator-=(const LcNumber& o) { return *this = *this - o; }
    LcNumber& operator*=(const LcNumber& o) { return *this = *this * o; }

    /// Structural equality: same terms and same horizon.
    friend bool operator==(const LcNumber&, const LcNumber&) = default;

  private:
    static LcNumber add(const LcNumber& x, const LcNumber& y, double sign) {
        LcNumber r;
        r.horizon_ = min(x.horizon_, y.horizon_);
        r.terms_.reserve(x.terms_.size() + y.terms_.size());
        auto i = x.terms_.begin();
        auto j = y.terms_.begin();
        auto visible = [&](const ExpQ& e) { return Horizon(e) < r.horizon_; };
        while (i != x.terms_.end() || j != y.terms_.end()) {
            Term t;
            if (j == y.terms_.end() || (i != x.terms_.end() && i->exp < j->exp)) {
                t = *i++;
            } else if (i == x.terms_.end() || j->exp < i->exp) {
                t = {j->exp, sign * j->coeff};
                ++j;
            } else {
                t = {i->exp, i->coeff + sign * j->coeff};
                ++i;
                ++j;
            }
            if (!visible(t.exp)) {
                break;
            }
            if (t.coeff != 0.0) {
                r.terms_.push_back(t);
            }
        }
        return r;
    }

    static LcNumber multiply(const LcNumber& x, const LcNumber& y) {
        // A term-less operand stands for "something at or above its horizon",
        // so its horizon plays the role of its valuation.
        const Valuation lx = x.is_zero() ? x.horizon_ : x.lambda();
        const Valuation ly = y.is_zero() ? y.horizon_ : y.lambda();
        LcNumber r;
        r.horizon_ = min(x.horizon_ + ly, y.horizon_ + lx);
        if (x.is_zero() || y.is_zero()) {
            return r;
        }
        std::vector<Term> raw;
        raw.reserve(x.terms_.size() * y.terms_.size());
        for (const auto& a : x.terms_) {
            const ExpQ cut = r.horizon_.is_finite() ? r.horizon_.value() - a.exp : ExpQ{};
            for (const auto& b : y.terms_) {
                if (r.horizon_.is_finite() && !(b.exp < cut)) {
                    break;
                }
                raw.push_back({a.exp + b.exp, a.coeff * b.coeff});
            }
        }
        return normalize(std::move(raw), r.horizon_);
    }

    std::vector<Term> terms_;
    Horizon horizon_ = Horizon::infinity();
};

inline LcNumber add(const LcNumber& x, const LcNumber& y) { return x + y; }
inline LcNumber mul(const LcNumber& x, const LcNumber& y) { return x * y; }
inline Valuation lambda_val(const LcNumber& x) { return x.lambda(); }

/// Sign of x - y, decided by the coefficient at the valuation of the
/// difference; equal_at_horizon when the difference has no visible terms.
inline Ordering compare(const LcNumber& x, const LcNumber& y) {
    const LcNumber diff = x - y;
    if (diff.is_zero()) {
        return Ordering::equal_at_horizon;
    }
    return diff.leading().coeff > 0.0 ? Ordering::greater : Ordering::less;
}

inline Ordering reverse(Ordering o) {
    switch (o) {
    case Ordering::less:
        return Ordering::greater;
    case Ordering::greater:
        return Ordering::less;
    default:
        return o;
    }
}

inline LcNumber abs_val(const LcNumber& x) { return compare(x, LcNumber::zero()) == Ordering::less ? -x : x; }

/// |x| << |y|: n|x| < |y| for every natural n, i.e. lambda(x) > lambda(y).
inline bool much_less(const LcNumber& x, const LcNumber& y) {
    if (x.is_zero() || y.is_zero()) {
        throw zero_operand();
    }
    return y.lambda() < x.lambda();
}

/// The ultrametric exp(-lambda(x - y)); 0 when the difference vanishes.
inline double ultrametric(const LcNumber& x, const LcNumber& y) {
    const Valuation l = (x - y).lambda();
    if (l.is_pos_inf()) {
        return 0.0;
    }
    return std::exp(-l.value().to_double());
}

namespace detail {

/// Horizon to use when a series must be summed for `x`. Numbers without a
/// finite horizon get a relative budget of kDefaultHorizon above lambda(x).
inline Horizon summation_horizon(const LcNumber& x) {
    if (x.horizon().is_finite()) {
        return x.horizon();
    }
    const Valuation l = x.is_zero() ? Valuation(0) : x.lambda();
    return l + Horizon(kDefaultHorizon);
}

/// Sums c(0) + c(1) u + c(2) u^2 + ... for lambda(u) > 0 up to the horizon of
/// u. Stops after ten consecutive terms that are invisible at the horizon.
inline LcNumber sum_power_series(const LcNumber& u_in, const std::function<double(std::int64_t)>& c) {
    if (u_in.is_zero()) {
        return LcNumber::constant(c(0), u_in.horizon());
    }
    const Horizon h = summation_horizon(u_in);
    const LcNumber u = u_in.with_horizon(min(u_in.horizon(), h));
    LcNumber acc = LcNumber::constant(c(0), h);
    if (!(Valuation(0) < u.lambda())) {
        throw std::logic_error("sum_power_series needs an infinitesimal argument");
    }
    LcNumber power = LcNumber::constant(1.0);
    int invisible = 0;
    for (std::int64_t j = 1; invisible < 10; ++j) {
        power = (power * u).truncated(acc.horizon());
        if (power.is_zero()) {
            ++invisible;
            continue;
        }
        const double cj = c(j);
        if (cj == 0.0) {
            continue;
        }
        invisible = 0;
        acc += power.scaled(cj);
    }
    for (const auto& t : acc.terms()) {
        if (!std::isfinite(t.coeff)) {
            throw coefficient_overflow();
        }
    }
    return acc;
}

} // namespace detail

/// Multiplicative inverse: factor out the leading term a d^q and sum the
/// geometric series of the remainder. Result horizon is h(x) - 2 lambda(x).
inline LcNumber inv(const LcNumber& x) {
    if (x.is_zero()) {
        throw zero_division();
    }
    const Term lead = x.leading();
    const LcNumber unit = x.shifted(-lead.exp).divided(lead.coeff);
    const LcNumber u = unit - LcNumber::constant(1.0);
    const LcNumber series = detail::sum_power_series(u, [](std::int64_t j) { return (j % 2 == 0) ? 1.0 : -1.0; });
    return series.shifted(-lead.exp).divided(lead.coeff);
}

inline LcNumber operator/(const LcNumber& x, const LcNumber& y) { return x * inv(y); }

/// Integer power by repeated squaring; negative exponents invert first.
inline LcNumber pow(const LcNumber& x, std::int64_t n) {
    if (n < 0) {
        return pow(inv(x), -n);
    }
    LcNumber result = LcNumber::constant(1.0);
    LcNumber base = x;
    while (n > 0) {
        if (n & 1) {
            result *= base;
        }
        n >>= 1;
        if (n > 0) {
            base *= base;
        }
    }
    return result;
}

/// Coefficient-wise agreement of x and y below min(h(x), h(y)).
/// Exponents where both sides carry a coefficient are compared with
/// |a - b| <= rel_tol * max(|a|, |b|); a coefficient present on one side
/// only must itself be below abs_tol.
inline bool agrees_to_horizon(const LcNumber& x, const LcNumber& y, double rel_tol = 0.0, double abs_tol = 0.0) {
    const Horizon h = min(x.horizon(), y.horizon());
    const LcNumber a = x.truncated(h);
    const LcNumber b = y.truncated(h);
    auto i = a.terms().begin();
    auto j = b.terms().begin();
    while (i != a.terms().end() || j != b.terms().end()) {
        if (j == b.terms().end() || (i != a.terms().end() && i->exp < j->exp)) {
            if (std::abs(i->coeff) > abs_tol) {
                return false;
            }
            ++i;
        } else if (i == a.terms().end() || j->exp < i->exp) {
            if (std::abs(j->coeff) > abs_tol) {
                return false;
            }
            ++j;
        } else {
            const double diff = std::abs(i->coeff - j->coeff);
            if (diff > rel_tol * std::max(std::abs(i->coeff), std::abs(j->coeff)) && diff > abs_tol) {
                return false;
            }
            ++i;
            ++j;
        }
    }
    return true;
}

/// Relative and absolute floors below which a coefficient of a difference
/// of two computed numbers counts as rounding noise.
inline constexpr double kNoiseRel = 1e-10;
inline constexpr double kNoiseAbs = 1e-13;

/// x - y below min(h(x), h(y)), without the coefficients that are within
/// rounding noise: |c| <= rel * max(|x_q|, |y_q|) or |c| <= abs * (largest
/// coefficient of x or y).
inline LcNumber difference_above_noise(const LcNumber& x, const LcNumber& y, double rel = kNoiseRel,
                                       double abs = kNoiseAbs) {
    const LcNumber raw = x - y;
    double scale = 0.0;
    for (const auto& t : x.terms()) {
        scale = std::max(scale, std::abs(t.coeff));
    }
    for (const auto& t : y.terms()) {
        scale = std::max(scale, std::abs(t.coeff));
    }
    std::vector<Term> kept;
    for (const auto& t : raw.terms()) {
        const double mag = std::abs(t.coeff);
        const double local = std::max(std::abs(x.coeff_at(t.exp)), std::abs(y.coeff_at(t.exp)));
        if (mag > rel * local && mag > abs * scale) {
            kept.push_back(t);
        }
    }
    return LcNumber::normalize(std::move(kept), raw.horizon());
}

} // namespace levi
