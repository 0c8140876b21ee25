#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "number.hpp"
#include "rational.hpp"
#include "series.hpp"

namespace levi {

/// Exact rational constants in expressions share the exponent type.
using Rational = ExpQ;

enum class BinaryOp { add, sub, mul, div };
enum class Func { exp, ln, sin, cos, sqrt, abs };

inline const char* to_string(Func f) {
    switch (f) {
    case Func::exp:
        return "exp";
    case Func::ln:
        return "ln";
    case Func::sin:
        return "sin";
    case Func::cos:
        return "cos";
    case Func::sqrt:
        return "sqrt";
    default:
        return "abs";
    }
}

class Expr;

namespace node {
struct Constant {
    Rational value;
};
struct Variable {
    std::string name;
};
struct Binary;
struct IntPow;
struct Apply;
} // namespace node

/// Immutable expression tree; copies share structure.
class Expr {
  public:
    struct Node;

    Expr() : Expr(Rational(0)) {}
    Expr(Rational q); // NOLINT(implicit)
    static Expr variable(std::string name);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
    static Expr int_pow(Expr base, std::int64_t exponent);
    static Expr apply(Func f, Expr arg);

    [[nodiscard]] const Node& node() const { return *node_; }

    [[nodiscard]] const Rational* as_constant() const;
    [[nodiscard]] const std::string* as_variable() const;

    friend bool operator==(const Expr& a, const Expr& b);

  private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

namespace node {
struct Binary {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
};
struct IntPow {
    Expr base;
    std::int64_t exponent;
};
struct Apply {
    Func func;
    Expr arg;
};
} // namespace node

struct Expr::Node {
    std::variant<node::Constant, node::Variable, node::Binary, node::IntPow, node::Apply> v;
};

inline Expr::Expr(Rational q) : node_(std::make_shared<const Node>(Node{node::Constant{q}})) {}
inline Expr Expr::variable(std::string name) {
    return Expr(std::make_shared<const Node>(Node{node::Variable{std::move(name)}}));
}
inline Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const Node>(Node{node::Binary{op, std::move(lhs), std::move(rhs)}}));
}
inline Expr Expr::int_pow(Expr base, std::int64_t exponent) {
    return Expr(std::make_shared<const Node>(Node{node::IntPow{std::move(base), exponent}}));
}
inline Expr Expr::apply(Func f, Expr arg) {
    return Expr(std::make_shared<const Node>(Node{node::Apply{f, std::move(arg)}}));
}
inline const Rational* Expr::as_constant() const {
    const auto* c = std::get_if<node::Constant>(&node_->v);
    return c ? &c->value : nullptr;
}
inline const std::string* Expr::as_variable() const {
    const auto* v = std::get_if<node::Variable>(&node_->v);
    return v ? &v->name : nullptr;
}

inline bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    const auto& x = a.node_->v;
    const auto& y = b.node_->v;
    if (x.index() != y.index()) {
        return false;
    }
    return std::visit(
        [&](const auto& l) -> bool {
            using T = std::decay_t<decltype(l)>;
            const auto& r = std::get<T>(y);
            if constexpr (std::is_same_v<T, node::Constant>) {
                return l.value == r.value;
            } else if constexpr (std::is_same_v<T, node::Variable>) {
                return l.name == r.name;
            } else if constexpr (std::is_same_v<T, node::Binary>) {
                return l.op == r.op && l.lhs == r.lhs && l.rhs == r.rhs;
            } else if constexpr (std::is_same_v<T, node::IntPow>) {
                return l.exponent == r.exponent && l.base == r.base;
            } else {
                return l.func == r.func && l.arg == r.arg;
            }
        },
        x);
}

inline Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::binary(BinaryOp::div, std::move(a), std::move(b)); }

// ---------------------------------------------------------------------------
// Printing

namespace detail {

enum Prec { prec_sum = 1, prec_product = 2, prec_power = 4, prec_atom = 5 };

inline bool is_plain_integer(const Expr& e) {
    const Rational* c = e.as_constant();
    return c && c->is_integer() && c->num() >= 0;
}

inline std::pair<std::string, int> print(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::pair<std::string, int> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, node::Constant>) {
                const Rational& q = n.value;
                if (q.num() < 0) {
                    return {"(" + q.str() + ")", prec_atom};
                }
                return {q.str(), q.is_integer() ? prec_atom : prec_product};
            } else if constexpr (std::is_same_v<T, node::Variable>) {
                return {n.name, prec_atom};
            } else if constexpr (std::is_same_v<T, node::Binary>) {
                const int p = (n.op == BinaryOp::add || n.op == BinaryOp::sub) ? prec_sum : prec_product;
                auto [ls, lp] = print(n.lhs);
                auto [rs, rp] = print(n.rhs);
                if (lp < p) {
                    ls = "(" + ls + ")";
                }
                // a/b with two bare integers would read back as one constant.
                const bool fold_hazard = n.op == BinaryOp::div && is_plain_integer(n.lhs) && is_plain_integer(n.rhs);
                if (rp <= p || fold_hazard) {
                    rs = "(" + rs + ")";
                }
                static constexpr const char* ops[] = {" + ", " - ", "*", "/"};
                return {ls + ops[static_cast<int>(n.op)] + rs, p};
            } else if constexpr (std::is_same_v<T, node::IntPow>) {
                auto [bs, bp] = print(n.base);
                if (bp < prec_atom) {
                    bs = "(" + bs + ")";
                }
                return {bs + "^" + std::to_string(n.exponent), prec_power};
            } else {
                return {std::string(to_string(n.func)) + "(" + print(n.arg).first + ")", prec_atom};
            }
        },
        e.node().v);
}

} // namespace detail

inline std::string to_string(const Expr& e) { return detail::print(e).first; }

// ---------------------------------------------------------------------------
// Parsing
//
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?
//   exponent:= ('-'? INT | '(' '-'? INT ')') ('^' exponent)?
//   primary := NUMBER | IDENT | FUNC '(' expr ')' | '(' expr ')'
//
// A quotient of two bare numeric literals ("7/2") is read as one exact
// rational constant.

namespace detail {

class ExprParser {
  public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    Expr parse() {
        Expr e = expr().e;
        skip_ws();
        if (pos_ < text_.size()) {
            fail({"operator", "end of input"}, "unexpected input");
        }
        return e;
    }

  private:
    struct Parsed {
        Expr e;
        bool literal = false;
    };

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& what) {
        skip_ws();
        throw syntax_error(pos_, std::move(expected), what);
    }

    Parsed expr() {
        Parsed lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = {lhs.e + term().e, false};
            } else if (accept('-')) {
                lhs = {lhs.e - term().e, false};
            } else {
                return lhs;
            }
        }
    }

    Parsed term() {
        Parsed lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = {lhs.e * unary().e, false};
            } else if (accept('/')) {
                Parsed rhs = unary();
                const Rational* a = lhs.e.as_constant();
                const Rational* b = rhs.e.as_constant();
                if (lhs.literal && rhs.literal && a && b && b->num() != 0) {
                    lhs = {Expr(*a / *b), false};
                } else {
                    lhs = {lhs.e / rhs.e, false};
                }
            } else {
                return lhs;
            }
        }
    }

    Parsed unary() {
        if (accept('-')) {
            Parsed inner = unary();
            if (inner.literal) {
                return {Expr(-*inner.e.as_constant()), true};
            }
            return {Expr(Rational(-1)) * inner.e, false};
        }
        return power();
    }

    Parsed power() {
        Parsed base = primary();
        if (accept('^')) {
            return {Expr::int_pow(base.e, exponent()), false};
        }
        return base;
    }

    std::int64_t exponent() {
        std::int64_t v = 0;
        if (accept('(')) {
            const bool neg = accept('-');
            v = integer();
            v = neg ? -v : v;
            if (!accept(')')) {
                fail({"')'"}, "unterminated exponent");
            }
        } else {
            const bool neg = accept('-');
            v = integer();
            v = neg ? -v : v;
        }
        if (accept('^')) {
            const std::size_t at = pos_;
            const std::int64_t e = exponent();
            if (e < 0) {
                if (v == 1 || v == -1) {
                    return (v == -1 && (-e) % 2 == 1) ? -1 : 1;
                }
                throw syntax_error(at, {"nonnegative integer"}, "exponent tower does not yield an integer");
            }
            std::int64_t r = 1;
            for (std::int64_t i = 0; i < e; ++i) {
                if (__builtin_mul_overflow(r, v, &r)) {
                    throw syntax_error(at, {}, "integer exponent overflow");
                }
            }
            v = r;
        }
        return v;
    }

    std::int64_t integer() {
        skip_ws();
        const std::size_t start = pos_;
        std::int64_t v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, text_[pos_] - '0', &v)) {
                throw syntax_error(start, {}, "integer too large");
            }
            ++pos_;
        }
        if (pos_ == start) {
            fail({"integer"}, "expected an integer exponent");
        }
        return v;
    }

    Parsed number() {
        const std::size_t start = pos_;
        std::int64_t num = 0;
        std::int64_t den = 1;
        bool frac = false;
        bool any = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                if (__builtin_mul_overflow(num, 10, &num) || __builtin_add_overflow(num, c - '0', &num) ||
                    (frac && __builtin_mul_overflow(den, 10, &den))) {
                    throw syntax_error(start, {}, "numeric literal too long");
                }
                any = true;
            } else if (c == '.' && !frac) {
                frac = true;
            } else {
                break;
            }
            ++pos_;
        }
        if (!any) {
            pos_ = start;
            fail({"number"}, "malformed number");
        }
        return {Expr(Rational(num, den)), true};
    }

    Parsed primary() {
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (accept('(')) {
            Parsed inner = expr();
            if (!accept(')')) {
                fail({"')'"}, "unbalanced parenthesis");
            }
            return {inner.e, false};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name(text_.substr(start, pos_ - start));
            static const std::map<std::string, Func> funcs = {{"exp", Func::exp},   {"ln", Func::ln},
                                                              {"sin", Func::sin},   {"cos", Func::cos},
                                                              {"sqrt", Func::sqrt}, {"abs", Func::abs}};
            if (auto it = funcs.find(name); it != funcs.end()) {
                if (!accept('(')) {
                    fail({"'('"}, "function name must be followed by an argument list");
                }
                Parsed arg = expr();
                if (!accept(')')) {
                    fail({"')'"}, "unbalanced parenthesis");
                }
                return {Expr::apply(it->second, arg.e), false};
            }
            return {Expr::variable(name), false};
        }
        fail({"number", "identifier", "'('", "'-'"}, "expected an operand");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Expr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

inline void collect_variables(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, node::Variable>) {
                out.insert(n.name);
            } else if constexpr (std::is_same_v<T, node::Binary>) {
                collect_variables(n.lhs, out);
                collect_variables(n.rhs, out);
            } else if constexpr (std::is_same_v<T, node::IntPow>) {
                collect_variables(n.base, out);
            } else if constexpr (std::is_same_v<T, node::Apply>) {
                collect_variables(n.arg, out);
            }
        },
        e.node().v);
}

inline std::set<std::string> variables(const Expr& e) {
    std::set<std::string> out;
    collect_variables(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

inline double eval_double(const Expr& e, const std::map<std::string, double>& env = {}) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, node::Constant>) {
                return n.value.to_double();
            } else if constexpr (std::is_same_v<T, node::Variable>) {
                auto it = env.find(n.name);
                if (it == env.end()) {
                    throw unbound_variable(n.name);
                }
                return it->second;
            } else if constexpr (std::is_same_v<T, node::Binary>) {
                const double a = eval_double(n.lhs, env);
                const double b = eval_double(n.rhs, env);
                switch (n.op) {
                case BinaryOp::add:
                    return a + b;
                case BinaryOp::sub:
                    return a - b;
                case BinaryOp::mul:
                    return a * b;
                default:
                    return a / b;
                }
            } else if constexpr (std::is_same_v<T, node::IntPow>) {
                const double b = eval_double(n.base, env);
                double r = 1.0;
                for (std::int64_t i = 0; i < (n.exponent < 0 ? -n.exponent : n.exponent); ++i) {
                    r *= b;
                }
                return n.exponent < 0 ? 1.0 / r : r;
            } else {
                const double a = eval_double(n.arg, env);
                switch (n.func) {
                case Func::exp:
                    return std::exp(a);
                case Func::ln:
                    return std::log(a);
                case Func::sin:
                    return std::sin(a);
                case Func::cos:
                    return std::cos(a);
                case Func::sqrt:
                    return std::sqrt(a);
                default:
                    return std::abs(a);
                }
            }
        },
        e.node().v);
}

using LcEnv = std::map<std::string, LcNumber, std::less<>>;

/// Evaluates e with Levi-Civita arguments. Constants are exact (infinite
/// horizon); horizons of the result come from the bound variables.
inline LcNumber eval_lc(const Expr& e, const LcEnv& env) {
    return std::visit(
        [&](const auto& n) -> LcNumber {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, node::Constant>) {
                return LcNumber::constant(n.value.to_double());
            } else if constexpr (std::is_same_v<T, node::Variable>) {
                auto it = env.find(n.name);
                if (it == env.end()) {
                    throw unbound_variable(n.name);
                }
                return it->second;
            } else if constexpr (std::is_same_v<T, node::Binary>) {
                const LcNumber a = eval_lc(n.lhs, env);
                const LcNumber b = eval_lc(n.rhs, env);
                switch (n.op) {
                case BinaryOp::add:
                    return a + b;
                case BinaryOp::sub:
                    return a - b;
                case BinaryOp::mul:
                    return a * b;
                default:
                    return a / b;
                }
            } else if constexpr (std::is_same_v<T, node::IntPow>) {
                return pow(eval_lc(n.base, env), n.exponent);
            } else {
                const LcNumber a = eval_lc(n.arg, env);
                switch (n.func) {
                case Func::exp:
                    return apply_elementary(Elementary::exp, a);
                case Func::ln:
                    return apply_elementary(Elementary::ln, a);
                case Func::sin:
                    return apply_elementary(Elementary::sin, a);
                case Func::cos:
                    return apply_elementary(Elementary::cos, a);
                case Func::sqrt:
                    return nth_root(a, 2);
                default:
                    return abs_val(a);
                }
            }
        },
        e.node().v);
}

// ---------------------------------------------------------------------------
// Symbolic differentiation (test oracle). Only constant folding, no further
// simplification.

namespace detail {

inline bool is_const(const Expr& e, std::int64_t v) {
    const Rational* c = e.as_constant();
    return c && *c == Rational(v);
}

inline Expr s_add(const Expr& a, const Expr& b) {
    if (is_const(a, 0)) {
        return b;
    }
    if (is_const(b, 0)) {
        return a;
    }
    if (a.as_constant() && b.as_constant()) {
        return Expr(*a.as_constant() + *b.as_constant());
    }
    return a + b;
}

inline Expr s_sub(const Expr& a, const Expr& b) {
    if (is_const(b, 0)) {
        return a;
    }
    if (a.as_constant() && b.as_constant()) {
        return Expr(*a.as_constant() - *b.as_constant());
    }
    return a - b;
}

inline Expr s_mul(const Expr& a, const Expr& b) {
    if (is_const(a, 0) || is_const(b, 0)) {
        return Expr(Rational(0));
    }
    if (is_const(a, 1)) {
        return b;
    }
    if (is_const(b, 1)) {
        return a;
    }
    if (a.as_constant() && b.as_constant()) {
        return Expr(*a.as_constant() * *b.as_constant());
    }
    return a * b;
}

inline Expr s_div(const Expr& a, const Expr& b) {
    if (is_const(a, 0)) {
        return Expr(Rational(0));
    }
    if (is_const(b, 1)) {
        return a;
    }
    return a / b;
}

inline Expr s_pow(const Expr& base, std::int64_t n) {
    if (n == 0) {
        return Expr(Rational(1));
    }
    if (n == 1) {
        return base;
    }
    return Expr::int_pow(base, n);
}

} // namespace detail

inline Expr diff_symbolic(const Expr& e, const std::string& var) {
    using namespace detail;
    return std::visit(
        [&](const auto& n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, node::Constant>) {
                return Expr(Rational(0));
            } else if constexpr (std::is_same_v<T, node::Variable>) {
                return Expr(Rational(n.name == var ? 1 : 0));
            } else if constexpr (std::is_same_v<T, node::Binary>) {
                const Expr du = diff_symbolic(n.lhs, var);
                const Expr dv = diff_symbolic(n.rhs, var);
                switch (n.op) {
                case BinaryOp::add:
                    return s_add(du, dv);
                case BinaryOp::sub:
                    return s_sub(du, dv);
                case BinaryOp::mul:
                    return s_add(s_mul(du, n.rhs), s_mul(n.lhs, dv));
                default:
                    return s_div(s_sub(s_mul(du, n.rhs), s_mul(n.lhs, dv)), s_pow(n.rhs, 2));
                }
            } else if constexpr (std::is_same_v<T, node::IntPow>) {
                if (n.exponent == 0) {
                    return Expr(Rational(0));
                }
                return s_mul(s_mul(Expr(Rational(n.exponent)), s_pow(n.base, n.exponent - 1)),
                             diff_symbolic(n.base, var));
            } else {
                const Expr du = diff_symbolic(n.arg, var);
                switch (n.func) {
                case Func::exp:
                    return s_mul(Expr::apply(Func::exp, n.arg), du);
                case Func::ln:
                    return s_div(du, n.arg);
                case Func::sin:
                    return s_mul(Expr::apply(Func::cos, n.arg), du);
                case Func::cos:
                    return s_mul(s_mul(Expr(Rational(-1)), Expr::apply(Func::sin, n.arg)), du);
                case Func::sqrt:
                    return s_div(du, s_mul(Expr(Rational(2)), Expr::apply(Func::sqrt, n.arg)));
                default:
                    throw not_differentiable("abs is not differentiable at 0");
                }
            }
        },
        e.node().v);
}

} // namespace levi
