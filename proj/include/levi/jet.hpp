#pragma once

// Truncated multivariate Taylor arithmetic with Levi-Civita coefficients.
// A Jet holds c_alpha for every multi-index |alpha| <= k and represents
// sum c_alpha t^alpha modulo terms of total degree k+1.

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "number.hpp"
#include "series.hpp"

namespace levi {

using MultiIndex = std::vector<int>;

/// Monomial table for n variables up to total degree k.
class JetSpace {
  public:
    JetSpace(int n, int k) : n_(n), k_(k) {
        if (n < 1 || k < 0) {
            throw std::invalid_argument("jet space needs n >= 1 and k >= 0");
        }
        for (int deg = 0; deg <= k; ++deg) {
            MultiIndex a(static_cast<std::size_t>(n), 0);
            enumerate(a, 0, deg);
        }
        for (std::size_t i = 0; i < alphas_.size(); ++i) {
            index_.emplace(alphas_[i], i);
        }
        splits_.resize(alphas_.size());
        for (std::size_t a = 0; a < alphas_.size(); ++a) {
            for (std::size_t b = 0; b < alphas_.size(); ++b) {
                if (degree_[a] + degree_[b] > k) {
                    continue;
                }
                MultiIndex s = alphas_[a];
                for (std::size_t i = 0; i < s.size(); ++i) {
                    s[i] += alphas_[b][i];
                }
                splits_[index_.at(s)].emplace_back(a, b);
            }
        }
    }

    [[nodiscard]] int vars() const { return n_; }
    [[nodiscard]] int order() const { return k_; }
    [[nodiscard]] std::size_t size() const { return alphas_.size(); }
    [[nodiscard]] const MultiIndex& alpha(std::size_t i) const { return alphas_[i]; }
    [[nodiscard]] int degree(std::size_t i) const { return degree_[i]; }
    [[nodiscard]] std::size_t index(const MultiIndex& a) const { return index_.at(a); }
    /// Pairs (a, b) with alpha(a) + alpha(b) = alpha(c).
    [[nodiscard]] const std::vector<std::pair<std::size_t, std::size_t>>& splits(std::size_t c) const {
        return splits_[c];
    }

  private:
    void enumerate(MultiIndex& a, std::size_t pos, int left) {
        if (pos + 1 == a.size()) {
            a[pos] = left;
            alphas_.push_back(a);
            degree_.push_back(0);
            for (int v : a) {
                degree_.back() += v;
            }
            return;
        }
        for (int v = left; v >= 0; --v) {
            a[pos] = v;
            enumerate(a, pos + 1, left - v);
        }
    }

    int n_;
    int k_;
    std::vector<MultiIndex> alphas_;
    std::vector<int> degree_;
    std::map<MultiIndex, std::size_t> index_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> splits_;
};

class Jet {
  public:
    Jet(std::shared_ptr<const JetSpace> space, LcNumber c0) : space_(std::move(space)) {
        c_.assign(space_->size(), LcNumber::zero());
        c_[0] = std::move(c0);
    }
    /// The coordinate function x_i expanded about `value`.
    static Jet variable(std::shared_ptr<const JetSpace> space, int i, LcNumber value) {
        Jet r(space, std::move(value));
        MultiIndex e(static_cast<std::size_t>(space->vars()), 0);
        if (space->order() >= 1) {
            e[static_cast<std::size_t>(i)] = 1;
            r.c_[space->index(e)] = LcNumber::constant(1.0);
        }
        return r;
    }

    [[nodiscard]] const JetSpace& space() const { return *space_; }
    [[nodiscard]] const std::shared_ptr<const JetSpace>& space_ptr() const { return space_; }
    [[nodiscard]] const LcNumber& operator[](std::size_t i) const { return c_[i]; }
    [[nodiscard]] const LcNumber& at(const MultiIndex& a) const { return c_[space_->index(a)]; }
    [[nodiscard]] const LcNumber& value() const { return c_[0]; }

    friend Jet operator+(const Jet& x, const Jet& y) {
        Jet r = x;
        for (std::size_t i = 0; i < r.c_.size(); ++i) {
            r.c_[i] += y.c_[i];
        }
        return r;
    }
    friend Jet operator-(const Jet& x, const Jet& y) {
        Jet r = x;
        for (std::size_t i = 0; i < r.c_.size(); ++i) {
            r.c_[i] -= y.c_[i];
        }
        return r;
    }
    friend Jet operator-(const Jet& x) {
        Jet r = x;
        for (auto& c : r.c_) {
            c = -c;
        }
        return r;
    }
    friend Jet operator*(const Jet& x, const Jet& y) {
        Jet r(x.space_, LcNumber::zero());
        for (std::size_t c = 0; c < r.c_.size(); ++c) {
            LcNumber acc = LcNumber::zero();
            for (auto [a, b] : x.space_->splits(c)) {
                if (!x.c_[a].is_exact_zero() && !y.c_[b].is_exact_zero()) {
                    acc += x.c_[a] * y.c_[b];
                }
            }
            r.c_[c] = std::move(acc);
        }
        return r;
    }
    [[nodiscard]] Jet scaled(const LcNumber& s) const {
        Jet r = *this;
        for (auto& c : r.c_) {
            if (!c.is_exact_zero()) {
                c = c * s;
            }
        }
        return r;
    }

    /// sum_m coeffs[m] n^m where n is this jet without its constant term.
    [[nodiscard]] Jet compose(const std::vector<LcNumber>& coeffs) const {
        Jet n = *this;
        n.c_[0] = LcNumber::zero();
        Jet r(space_, coeffs.back());
        for (std::size_t m = coeffs.size() - 1; m-- > 0;) {
            r = r * n;
            r.c_[0] += coeffs[m];
        }
        return r;
    }

  private:
    std::shared_ptr<const JetSpace> space_;
    std::vector<LcNumber> c_;
};

namespace detail {

/// f^(m)(u0)/m! for m = 0..k, for the functions a jet can be pushed through.
inline std::vector<LcNumber> elementary_taylor(Func f, const LcNumber& u0, int k) {
    std::vector<LcNumber> c;
    c.reserve(static_cast<std::size_t>(k) + 1);
    switch (f) {
    case Func::exp: {
        const LcNumber e = apply_elementary(Elementary::exp, u0);
        for (int m = 0; m <= k; ++m) {
            c.push_back(e.scaled(inv_factorial(m)));
        }
        break;
    }
    case Func::ln: {
        c.push_back(apply_elementary(Elementary::ln, u0));
        const LcNumber r = inv(u0);
        LcNumber p = LcNumber::constant(1.0);
        for (int m = 1; m <= k; ++m) {
            p *= r;
            c.push_back(p.scaled((m % 2 == 1 ? 1.0 : -1.0) / m));
        }
        break;
    }
    case Func::sin:
    case Func::cos: {
        const LcNumber s = apply_elementary(Elementary::sin, u0);
        const LcNumber co = apply_elementary(Elementary::cos, u0);
        // d^m/du^m sin = sin(u + m pi/2); cos is sin shifted by one step.
        const LcNumber cycle[4] = {s, co, -s, -co};
        const int offset = f == Func::sin ? 0 : 1;
        for (int m = 0; m <= k; ++m) {
            c.push_back(cycle[(m + offset) % 4].scaled(inv_factorial(m)));
        }
        break;
    }
    case Func::sqrt: {
        const LcNumber root = nth_root(u0, 2);
        const LcNumber r = inv(u0);
        LcNumber p = root;
        double binom = 1.0;
        c.push_back(root);
        for (int m = 1; m <= k; ++m) {
            binom *= (0.5 - (m - 1)) / m;
            p *= r;
            c.push_back(p.scaled(binom));
        }
        break;
    }
    case Func::abs: {
        const Ordering o = compare(u0, LcNumber::zero());
        if (o == Ordering::equal_at_horizon) {
            throw non_jet_result("abs has no Taylor jet at 0");
        }
        const double sign = o == Ordering::less ? -1.0 : 1.0;
        c.push_back(u0.scaled(sign));
        if (k >= 1) {
            c.push_back(LcNumber::constant(sign));
        }
        for (int m = 2; m <= k; ++m) {
            c.push_back(LcNumber::zero());
        }
        break;
    }
    }
    return c;
}

} // namespace detail

inline Jet inv(const Jet& x) {
    const LcNumber r = inv(x.value());
    const int k = x.space().order();
    std::vector<LcNumber> c;
    LcNumber p = r;
    for (int m = 0; m <= k; ++m) {
        c.push_back(m % 2 == 0 ? p : -p);
        p *= r;
    }
    return x.compose(c);
}

inline Jet pow(const Jet& x, std::int64_t n) {
    if (n < 0) {
        return pow(inv(x), -n);
    }
    Jet result(x.space_ptr(), LcNumber::constant(1.0));
    Jet base = x;
    while (n > 0) {
        if (n & 1) {
            result = result * base;
        }
        n >>= 1;
        if (n > 0) {
            base = base * base;
        }
    }
    return result;
}

inline Jet apply(Func f, const Jet& x) {
    return x.compose(detail::elementary_taylor(f, x.value(), x.space().order()));
}

using JetEnv = std::map<std::string, Jet, std::less<>>;

/// Evaluates e over jets; constants enter as exact reals.
inline Jet eval_jet(const Expr& e, const JetEnv& env, const std::shared_ptr<const JetSpace>& space) {
    return std::visit(
        [&](const auto& n) -> Jet {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, node::Constant>) {
                return Jet(space, LcNumber::constant(n.value.to_double()));
            } else if constexpr (std::is_same_v<T, node::Variable>) {
                auto it = env.find(n.name);
                if (it == env.end()) {
                    throw unbound_variable(n.name);
                }
                return it->second;
            } else if constexpr (std::is_same_v<T, node::Binary>) {
                const Jet a = eval_jet(n.lhs, env, space);
                const Jet b = eval_jet(n.rhs, env, space);
                switch (n.op) {
                case BinaryOp::add:
                    return a + b;
                case BinaryOp::sub:
                    return a - b;
                case BinaryOp::mul:
                    return a * b;
                default:
                    return a * inv(b);
                }
            } else if constexpr (std::is_same_v<T, node::IntPow>) {
                return pow(eval_jet(n.base, env, space), n.exponent);
            } else {
                return apply(n.func, eval_jet(n.arg, env, space));
            }
        },
        e.node().v);
}

} // namespace levi
