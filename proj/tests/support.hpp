#pragma once

// Generators and reference oracles shared by the tests and the acceptance
// suite. Everything is driven by an explicit seed.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "levi/levi.hpp"

namespace levi::testing {

using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// k / 2^s with 1 <= |k| <= 64, 0 <= s <= 4.
inline double dyadic(Rng& rng) {
    std::int64_t k = uniform(rng, -64, 63);
    if (k >= 0) {
        ++k;
    }
    return static_cast<double>(k) / static_cast<double>(1 << uniform(rng, 0, 4));
}

/// p/q with q <= 6 and value in [-5, 5].
inline ExpQ small_exponent(Rng& rng) {
    const std::int64_t q = uniform(rng, 1, 6);
    return ExpQ(uniform(rng, -5 * q, 5 * q), q);
}

/// Nonzero number with 1..max_terms terms, dyadic coefficients.
inline LcNumber random_lc(Rng& rng, int max_terms = 8, Horizon h = Horizon(kDefaultHorizon)) {
    for (;;) {
        std::vector<Term> raw;
        const auto n = uniform(rng, 1, max_terms);
        for (std::int64_t i = 0; i < n; ++i) {
            raw.push_back({small_exponent(rng), dyadic(rng)});
        }
        LcNumber x = LcNumber::normalize(std::move(raw), h);
        if (!x.is_zero()) {
            return x;
        }
    }
}

/// Reference arithmetic on exponent -> coefficient maps, with the horizon
/// computed from the textbook rules. Independent of LcNumber internals.
struct Ref {
    std::map<ExpQ, double> terms;
    Horizon horizon = Horizon::infinity();

    static Ref of(const LcNumber& x) {
        Ref r;
        for (const auto& t : x.terms()) {
            r.terms[t.exp] = t.coeff;
        }
        r.horizon = x.horizon();
        return r;
    }
    [[nodiscard]] Valuation lambda() const {
        for (const auto& [e, c] : terms) {
            if (c != 0.0) {
                return Valuation(e);
            }
        }
        return Valuation::infinity();
    }
    [[nodiscard]] Ref clipped() const {
        Ref r;
        r.horizon = horizon;
        for (const auto& [e, c] : terms) {
            if (c != 0.0 && Horizon(e) < horizon) {
                r.terms[e] = c;
            }
        }
        return r;
    }
    friend Ref operator+(const Ref& a, const Ref& b) {
        Ref r = a;
        for (const auto& [e, c] : b.terms) {
            r.terms[e] += c;
        }
        r.horizon = min(a.horizon, b.horizon);
        return r.clipped();
    }
    friend Ref operator*(const Ref& a, const Ref& b) {
        Ref r;
        for (const auto& [ea, ca] : a.terms) {
            for (const auto& [eb, cb] : b.terms) {
                r.terms[ea + eb] += ca * cb;
            }
        }
        const Valuation la = a.terms.empty() ? a.horizon : a.lambda();
        const Valuation lb = b.terms.empty() ? b.horizon : b.lambda();
        r.horizon = min(a.horizon + lb, b.horizon + la);
        return r.clipped();
    }
    [[nodiscard]] bool matches(const LcNumber& x) const {
        const Ref c = clipped();
        if (!(c.horizon == x.horizon()) || c.terms.size() != x.size()) {
            return false;
        }
        auto it = c.terms.begin();
        for (const auto& t : x.terms()) {
            if (!(it->first == t.exp) || it->second != t.coeff) {
                return false;
            }
            ++it;
        }
        return true;
    }
};

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

/// j-th derivative by repeated symbolic differentiation, evaluated in binary64.
inline double symbolic_derivative(const Expr& f, const std::string& var, int j, double x0) {
    Expr g = f;
    for (int i = 0; i < j; ++i) {
        g = diff_symbolic(g, var);
    }
    return eval_double(g, {{var, x0}});
}

inline bool close(double a, double b, double rel, double abs = 0.0) {
    return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs);
}

/// Random polynomial sum c_alpha x^alpha over `vars`, integer coefficients
/// in [-5, 5], total degree <= degree.
inline Expr random_polynomial(Rng& rng, const std::vector<std::string>& vars, int degree, int terms = 6) {
    Expr sum = Expr(Rational(uniform(rng, -5, 5)));
    for (int t = 0; t < terms; ++t) {
        Expr mono = Expr(Rational(uniform(rng, -5, 5)));
        int left = static_cast<int>(uniform(rng, 0, degree));
        for (const auto& v : vars) {
            const int e = static_cast<int>(uniform(rng, 0, left));
            left -= e;
            if (e > 0) {
                mono = mono * Expr::int_pow(Expr::variable(v), e);
            }
        }
        sum = sum + mono;
    }
    return sum;
}

/// Arbitrary AST over the variables {x, y, z} for parser round trips.
inline Expr random_expr(Rng& rng, int depth) {
    if (depth == 0 || uniform(rng, 0, 4) == 0) {
        switch (uniform(rng, 0, 3)) {
        case 0:
            return Expr(Rational(uniform(rng, 0, 20)));
        case 1:
            return Expr(Rational(uniform(rng, -20, 20), uniform(rng, 1, 7)));
        default:
            return Expr::variable(std::string(1, static_cast<char>('x' + uniform(rng, 0, 2))));
        }
    }
    switch (uniform(rng, 0, 6)) {
    case 0:
        return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 1:
        return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 2:
        return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 3:
        return random_expr(rng, depth - 1) / random_expr(rng, depth - 1);
    case 4:
        return Expr::int_pow(random_expr(rng, depth - 1), uniform(rng, -3, 5));
    default:
        return Expr::apply(static_cast<Func>(uniform(rng, 0, 5)), random_expr(rng, depth - 1));
    }
}

/// Derivative corpus: polynomials, exp, ln(1+x), sin, cos, products and
/// compositions.
inline const std::vector<std::string>& derivative_corpus() {
    static const std::vector<std::string> corpus = {
        "x^2",
        "x^3 - 2*x + 1",
        "3*x^5 - x^4 + 7*x^2 - 11",
        "(x + 1)^6",
        "x^8 - x^7 + x",
        "(2*x - 3)^4*(x + 2)",
        "x*(x - 1)*(x + 2)*(x - 3)",
        "-4*x^3 + 5*x^2 - 6",
        "exp(x)",
        "exp(2*x)",
        "exp(-x^2)",
        "ln(1 + x)",
        "ln(1 + x^2)",
        "sin(x)",
        "cos(x)",
        "sin(3*x)",
        "cos(x^2)",
        "x*exp(x)",
        "x^2*sin(x)",
        "exp(x)*cos(x)",
        "sin(x)*cos(x)",
        "ln(1 + x)*exp(x)",
        "exp(sin(x))",
        "sin(exp(x))",
        "cos(sin(x))",
        "ln(1 + exp(x))",
        "exp(x)/(1 + x^2)",
        "1/(2 + x)",
        "sqrt(4 + x)",
        "(1 + x)^-2",
    };
    return corpus;
}

inline bool is_integer_polynomial(const std::string& s) {
    return s.find_first_of("abcdefghijklmnopqrstuvwyz/") == std::string::npos && s.find("^-") == std::string::npos;
}

} // namespace levi::testing
