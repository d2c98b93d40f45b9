#pragma once

// Exact rationals, finite binary expansions, and a parameter that may be
// known only up to a dyadic interval.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace hippoc {

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator. Text form is "a/b" (an integer "a" is accepted on input).
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(const mpz_class& num, const mpz_class& den);
    Rational(std::int64_t num, std::int64_t den);
    explicit Rational(const mpq_class& value);

    static Rational parse(std::string_view text);
    /// 2^{-k} for k >= 0.
    static Rational pow2_neg(unsigned k);

    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }
    const mpq_class& raw() const { return value_; }

    int sign() const { return sgn(value_); }
    bool is_dyadic() const;
    double to_double() const { return value_.get_d(); }

    /// Always "num/den", including "0/1" and "1/1".
    std::string str() const;

    Rational operator-() const { return Rational(mpq_class(-value_)); }
    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ + b.value_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ - b.value_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ * b.value_)); }
    friend Rational operator/(const Rational& a, const Rational& b);

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

private:
    mpq_class value_{0};
};

Rational abs(const Rational& x);
Rational pow(const Rational& x, unsigned exponent);

/// Finite binary expansion .b0 b1 b2 ... ; positions past size() read as 0.
class DyadicExpansion {
public:
    DyadicExpansion() = default;
    explicit DyadicExpansion(std::vector<std::uint8_t> bits);

    /// Accepts "0.0101", ".0101" or a bare digit string "0101".
    static DyadicExpansion parse(std::string_view text);

    std::size_t size() const { return bits_.size(); }
    int bit(std::size_t position) const { return position < bits_.size() ? bits_[position] : 0; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    DyadicExpansion prefix(std::size_t length) const;
    Rational value() const;

    /// Digits only, e.g. "0101".
    std::string digits() const;
    /// "0." followed by the digits.
    std::string str() const { return "0." + digits(); }

    friend bool operator==(const DyadicExpansion&, const DyadicExpansion&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Exact m-bit expansion of a dyadic rational k/2^m in [0,1).
DyadicExpansion expansion_of(const Rational& x);

/// Binary digit `position` of x in [0,1] using the terminating expansion for
/// dyadic x (x = 1 reads as .111...).
int binary_digit(const Rational& x, std::size_t position);

/// The bias parameter: an exact point, or a binary prefix denoting the closed
/// interval [v, v + 2^{-m}].
class RealParam {
public:
    explicit RealParam(Rational exact);
    explicit RealParam(DyadicExpansion prefix);

    /// "a/b" or an integer gives an exact value; "0.bbb" gives a binary prefix.
    static RealParam parse(std::string_view text);

    bool is_exact() const { return std::holds_alternative<Rational>(value_); }
    const Rational& exact() const;
    const DyadicExpansion& prefix() const;

    Rational lower() const;
    Rational upper() const;

    std::string str() const;

private:
    std::variant<Rational, DyadicExpansion> value_;
};

enum class Deviation { GEQ, LT, UNDECIDED };

std::string_view to_string(Deviation d);

/// Decides |x - p'| >= eps for every p' consistent with p (GEQ), < eps for
/// every consistent p' (LT), or neither (UNDECIDED).
Deviation compare_deviation(const Rational& x, const RealParam& p, const Rational& eps);

}  // namespace hippoc
