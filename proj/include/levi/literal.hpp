#pragma once

// Text form of Levi-Civita numbers:
//
//   number   := term (('+'|'-') term)*
//   term     := coeff | coeff? 'd' ('^' exponent)?
//   coeff    := decimal or fraction, e.g. 2, -3.5, 7/2
//   exponent := integer | decimal | '(' integer '/' integer ')'
//
// e.g. "2 + 3d^(1/2) - d^2", "d^-1", "0".

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "errors.hpp"
#include "number.hpp"
#include "rational.hpp"

namespace levi {

/// Shortest decimal that round-trips to the same binary64 value.
inline std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string format_exponent(const ExpQ& e) {
    if (e.is_integer()) {
        return std::to_string(e.num());
    }
    return "(" + std::to_string(e.num()) + "/" + std::to_string(e.den()) + ")";
}

/// Formats x in the literal grammar. The horizon is not part of the text.
inline std::string to_literal(const LcNumber& x) {
    if (x.is_zero()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto& t : x.terms()) {
        const bool negative = std::signbit(t.coeff);
        const double mag = std::abs(t.coeff);
        if (first) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        if (t.exp == 0) {
            out += format_real(mag);
            continue;
        }
        if (mag != 1.0) {
            out += format_real(mag);
        }
        out += "d";
        if (t.exp != 1) {
            out += "^" + format_exponent(t.exp);
        }
    }
    return out;
}

namespace detail {

class LiteralScanner {
  public:
    explicit LiteralScanner(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }
    [[nodiscard]] bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    [[nodiscard]] char peek() {
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
    void expect(char c) {
        if (!accept(c)) {
            fail({std::string("'") + c + "'"}, "unexpected input");
        }
    }
    [[nodiscard]] std::size_t pos() const { return pos_; }
    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& what) const {
        throw syntax_error(pos_, std::move(expected), what);
    }

    [[nodiscard]] bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.'; }

    /// Unsigned decimal digits with an optional fractional part, returned
    /// exactly as a rational.
    ExpQ exact_decimal() {
        skip_ws();
        const std::size_t start = pos_;
        std::int64_t num = 0;
        std::int64_t den = 1;
        bool any = false;
        bool frac = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                if (num > (std::numeric_limits<std::int64_t>::max() - 9) / 10 ||
                    (frac && den > std::numeric_limits<std::int64_t>::max() / 10)) {
                    throw syntax_error(start, {}, "numeric literal too long");
                }
                num = num * 10 + (c - '0');
                if (frac) {
                    den *= 10;
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
            fail({"number"}, "expected a number");
        }
        return ExpQ(num, den);
    }

    /// Unsigned integer.
    std::int64_t integer() {
        skip_ws();
        const std::size_t start = pos_;
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc{} || ptr == text_.data() + pos_) {
            fail({"integer"}, "expected an integer");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        if (v < 0) {
            pos_ = start;
            fail({"integer"}, "expected an unsigned integer");
        }
        return v;
    }

    /// Unsigned binary64 in decimal/scientific notation, optionally '/int'.
    double real() {
        skip_ws();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v,
                                         std::chars_format::general);
        if (ec != std::errc{} || ptr == text_.data() + pos_ || text_[pos_] == '-' || text_[pos_] == '+') {
            fail({"number"}, "expected a number");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        if (accept('/')) {
            const std::size_t at = pos_;
            const std::int64_t den = integer();
            if (den == 0) {
                throw syntax_error(at, {"nonzero integer"}, "zero denominator");
            }
            v /= static_cast<double>(den);
        }
        return v;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

inline ExpQ parse_d_exponent(LiteralScanner& s) {
    if (s.accept('(')) {
        const bool neg = s.accept('-');
        const std::int64_t num = s.integer();
        std::int64_t den = 1;
        if (s.accept('/')) {
            const std::size_t at = s.pos();
            den = s.integer();
            if (den == 0) {
                throw syntax_error(at, {"nonzero integer"}, "zero denominator");
            }
        }
        s.expect(')');
        return ExpQ(neg ? -num : num, den);
    }
    const bool neg = s.accept('-');
    if (!s.at_digit()) {
        s.fail({"integer", "decimal", "'('"}, "expected an exponent");
    }
    const ExpQ e = s.exact_decimal();
    return neg ? -e : e;
}

inline Term parse_lc_term(LiteralScanner& s, double sign) {
    double coeff = 1.0;
    bool have_coeff = false;
    if (s.at_digit()) {
        coeff = s.real();
        have_coeff = true;
    }
    if (s.accept('d')) {
        ExpQ e = 1;
        if (s.accept('^')) {
            e = parse_d_exponent(s);
        }
        return {e, sign * coeff};
    }
    if (!have_coeff) {
        s.fail({"number", "'d'"}, "expected a term");
    }
    return {0, sign * coeff};
}

} // namespace detail

/// Parses a literal; the result carries the given horizon.
inline LcNumber parse_lc(std::string_view text, Horizon horizon = Horizon(kDefaultHorizon)) {
    detail::LiteralScanner s(text);
    std::vector<Term> raw;
    double sign = 1.0;
    if (s.accept('-')) {
        sign = -1.0;
    } else {
        s.accept('+');
    }
    raw.push_back(detail::parse_lc_term(s, sign));
    while (!s.at_end()) {
        if (s.accept('+')) {
            sign = 1.0;
        } else if (s.accept('-')) {
            sign = -1.0;
        } else {
            s.fail({"'+'", "'-'", "end of input"}, "unexpected input");
        }
        raw.push_back(detail::parse_lc_term(s, sign));
    }
    return LcNumber::normalize(std::move(raw), horizon);
}

inline std::ostream& operator<<(std::ostream& os, const LcNumber& x) {
    return os << to_literal(x) << " [h " << x.horizon() << "]";
}

} // namespace levi
