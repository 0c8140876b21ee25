#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace levi {

/// Exact rational number with 64-bit numerator and denominator, always kept in
/// lowest terms with a positive denominator. Used for exponents of d.
class ExpQ {
  public:
    constexpr ExpQ() = default;
    constexpr ExpQ(std::int64_t n) : num_(n), den_(1) {} // NOLINT(implicit)
    ExpQ(std::int64_t n, std::int64_t d) { assign(n, d); }

    [[nodiscard]] constexpr std::int64_t num() const { return num_; }
    [[nodiscard]] constexpr std::int64_t den() const { return den_; }
    [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }
    [[nodiscard]] double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend ExpQ operator+(const ExpQ& a, const ExpQ& b) {
        if (a.den_ == b.den_) {
            return from_wide(static_cast<__int128>(a.num_) + b.num_, a.den_);
        }
        return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend ExpQ operator-(const ExpQ& a) { return from_wide(-static_cast<__int128>(a.num_), a.den_); }
    friend ExpQ operator-(const ExpQ& a, const ExpQ& b) { return a + (-b); }
    friend ExpQ operator*(const ExpQ& a, const ExpQ& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend ExpQ operator/(const ExpQ& a, const ExpQ& b) {
        if (b.num_ == 0) {
            throw std::domain_error("rational division by zero");
        }
        return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    ExpQ& operator+=(const ExpQ& o) { return *this = *this + o; }
    ExpQ& operator-=(const ExpQ& o) { return *this = *this - o; }

    friend constexpr bool operator==(const ExpQ& a, const ExpQ& b) = default;
    friend std::strong_ordering operator<=>(const ExpQ& a, const ExpQ& b) {
        const __int128 l = static_cast<__int128>(a.num_) * b.den_;
        const __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l <=> r;
    }

    /// Largest integer not above this value.
    [[nodiscard]] std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) {
            --q;
        }
        return q;
    }

    [[nodiscard]] std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend std::ostream& operator<<(std::ostream& os, const ExpQ& q) { return os << q.str(); }

  private:
    static ExpQ from_wide(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr __int128 lo = INT64_MIN;
        constexpr __int128 hi = INT64_MAX;
        if (n < lo || n > hi || d > hi) {
            throw std::overflow_error("rational exponent overflow");
        }
        ExpQ r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    void assign(std::int64_t n, std::int64_t d) {
        if (d == 0) {
            throw std::domain_error("rational with zero denominator");
        }
        *this = from_wide(n, d);
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// A rational extended by -inf and +inf. Valuations live in (Q ∪ {+inf}),
/// horizons likewise; the -inf end is used by the limsup surrogate.
class ExtendedQ {
  public:
    enum class Kind { neg_inf, finite, pos_inf };

    constexpr ExtendedQ() = default;
    ExtendedQ(ExpQ q) : kind_(Kind::finite), value_(q) {} // NOLINT(implicit)
    ExtendedQ(std::int64_t n) : kind_(Kind::finite), value_(n) {} // NOLINT(implicit)

    static ExtendedQ infinity() { return ExtendedQ(Kind::pos_inf); }
    static ExtendedQ neg_infinity() { return ExtendedQ(Kind::neg_inf); }

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_finite() const { return kind_ == Kind::finite; }
    [[nodiscard]] bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
    [[nodiscard]] bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

    /// Finite value; throws if infinite.
    [[nodiscard]] const ExpQ& value() const {
        if (kind_ != Kind::finite) {
            throw std::logic_error("ExtendedQ::value on an infinite value");
        }
        return value_;
    }

    [[nodiscard]] double to_double() const;

    friend bool operator==(const ExtendedQ& a, const ExtendedQ& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
    }
    friend std::strong_ordering operator<=>(const ExtendedQ& a, const ExtendedQ& b) {
        if (a.kind_ != b.kind_) {
            return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
        }
        if (a.kind_ != Kind::finite) {
            return std::strong_ordering::equal;
        }
        return a.value_ <=> b.value_;
    }

    /// Sum; +inf absorbs finite values and -inf. Mixing -inf with +inf is
    /// resolved toward +inf, which is what horizon and valuation algebra need.
    friend ExtendedQ operator+(const ExtendedQ& a, const ExtendedQ& b) {
        if (a.is_pos_inf() || b.is_pos_inf()) {
            return infinity();
        }
        if (a.is_neg_inf() || b.is_neg_inf()) {
            return neg_infinity();
        }
        return ExtendedQ(a.value_ + b.value_);
    }
    friend ExtendedQ operator-(const ExtendedQ& a) {
        if (a.is_pos_inf()) {
            return neg_infinity();
        }
        if (a.is_neg_inf()) {
            return infinity();
        }
        return ExtendedQ(-a.value_);
    }
    friend ExtendedQ operator-(const ExtendedQ& a, const ExtendedQ& b) { return a + (-b); }

    [[nodiscard]] std::string str() const {
        switch (kind_) {
        case Kind::neg_inf:
            return "-inf";
        case Kind::pos_inf:
            return "inf";
        default:
            return value_.str();
        }
    }
    friend std::ostream& operator<<(std::ostream& os, const ExtendedQ& q) { return os << q.str(); }

  private:
    explicit ExtendedQ(Kind k) : kind_(k) {}

    Kind kind_ = Kind::finite;
    ExpQ value_{};
};

inline double ExtendedQ::to_double() const {
    switch (kind_) {
    case Kind::neg_inf:
        return -std::numeric_limits<double>::infinity();
    case Kind::pos_inf:
        return std::numeric_limits<double>::infinity();
    default:
        return value_.to_double();
    }
}

inline ExtendedQ min(const ExtendedQ& a, const ExtendedQ& b) { return b < a ? b : a; }
inline ExtendedQ max(const ExtendedQ& a, const ExtendedQ& b) { return a < b ? b : a; }

/// Valuation values: finite rationals or +inf (the valuation of 0).
using Valuation = ExtendedQ;
/// Knowledge horizon of a truncated number: finite rational or +inf.
using Horizon = ExtendedQ;

} // namespace levi
