#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace levi {

// Every library failure derives from levi::error so callers (the CLI in
// particular) can map the whole family onto one exit code.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class zero_division : public error {
  public:
    zero_division() : error("division by a number with no terms below its horizon") {}
};

/// A series coefficient left the binary64 range.
class coefficient_overflow : public error {
  public:
    coefficient_overflow() : error("series coefficient overflows binary64") {}
};

class domain_error : public error {
  public:
    using error::error;
};

class not_positive : public domain_error {
  public:
    using domain_error::domain_error;
};

/// much_less on an operand with no terms.
class zero_operand : public error {
  public:
    zero_operand() : error("operand has no terms below its horizon") {}
};

class empty_series : public error {
  public:
    using error::error;
};

class not_convergent : public error {
  public:
    using error::error;
};

class not_in_radius : public error {
  public:
    using error::error;
};

class order_too_high : public error {
  public:
    using error::error;
};

class unbound_variable : public error {
  public:
    explicit unbound_variable(const std::string& name) : error("unbound variable '" + name + "'"), name_(name) {}
    [[nodiscard]] const std::string& name() const { return name_; }

  private:
    std::string name_;
};

class not_differentiable : public error {
  public:
    using error::error;
};

/// The infinitesimal evaluation produced exponents that are not jet orders.
class non_jet_result : public error {
  public:
    using error::error;
};

/// Not enough horizon to resolve the requested order.
class horizon_exhausted : public error {
  public:
    using error::error;
};

class not_indeterminate : public error {
  public:
    using error::error;
};

class zero_denominator : public error {
  public:
    using error::error;
};

class infinite_limit : public error {
  public:
    using error::error;
};

class syntax_error : public error {
  public:
    syntax_error(std::size_t offset, std::vector<std::string> expected, const std::string& what)
        : error(format(offset, expected, what)), offset_(offset), expected_(std::move(expected)) {}

    [[nodiscard]] std::size_t offset() const { return offset_; }
    [[nodiscard]] const std::vector<std::string>& expected() const { return expected_; }

  private:
    static std::string format(std::size_t offset, const std::vector<std::string>& expected, const std::string& what) {
        std::string msg = "syntax error at offset " + std::to_string(offset) + ": " + what;
        if (!expected.empty()) {
            msg += " (expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                msg += (i == 0 ? "" : ", ") + expected[i];
            }
            msg += ")";
        }
        return msg;
    }

    std::size_t offset_;
    std::vector<std::string> expected_;
};

} // namespace levi
