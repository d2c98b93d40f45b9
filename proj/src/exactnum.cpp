#include "hippoc/exactnum.hpp"

#include <algorithm>
#include <cctype>

#include "hippoc/error.hpp"

namespace hippoc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonDyadicDenominator: return "NonDyadicDenominator";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::InsufficientPrecision: return "InsufficientPrecision";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::TruncatedHeader: return "TruncatedHeader";
        case ErrorCode::UnknownSource: return "UnknownSource";
        case ErrorCode::PrefixTooShort: return "PrefixTooShort";
        case ErrorCode::InvalidInterval: return "InvalidInterval";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::DegenerateP: return "DegenerateP";
        case ErrorCode::ZeroTrials: return "ZeroTrials";
        case ErrorCode::NoPassingLevel: return "NoPassingLevel";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        throw Error(ErrorCode::InvalidArgument, "not a rational: '" + std::string(whole) + "'");
    }
    mpz_class v(std::string(s), 10);
    return negative ? mpz_class(-v) : v;
}

// Exponent m if v == 2^m, -1 otherwise.
long power_of_two_exponent(const mpz_class& v) {
    if (v <= 0) return -1;
    const auto low = mpz_scan1(v.get_mpz_t(), 0);
    return mpz_popcount(v.get_mpz_t()) == 1 ? static_cast<long>(low) : -1;
}

}  // namespace

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational::Rational(std::int64_t num, std::int64_t den)
    : Rational(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den))) {}

Rational::Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(text, text), mpz_class(1));
    return Rational(parse_integer(text.substr(0, slash), text), parse_integer(text.substr(slash + 1), text));
}

Rational Rational::pow2_neg(unsigned k) {
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
    return Rational(mpz_class(1), den);
}

bool Rational::is_dyadic() const { return power_of_two_exponent(value_.get_den()) >= 0; }

std::string Rational::str() const { return value_.get_num().get_str() + "/" + value_.get_den().get_str(); }

Rational operator/(const Rational& a, const Rational& b) {
    if (b.sign() == 0) throw Error(ErrorCode::DivisionByZero, "division by zero rational");
    return Rational(mpq_class(a.value_ / b.value_));
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

Rational pow(const Rational& x, unsigned exponent) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), x.raw().get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), x.raw().get_den_mpz_t(), exponent);
    return Rational(num, den);
}

DyadicExpansion::DyadicExpansion(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) throw Error(ErrorCode::InvalidArgument, "expansion digit must be 0 or 1");
    }
}

DyadicExpansion DyadicExpansion::parse(std::string_view text) {
    if (text.starts_with("0.")) {
        text.remove_prefix(2);
    } else if (text.starts_with(".")) {
        text.remove_prefix(1);
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '0' && text[i] != '1') throw ParseError(i, "binary digit expected");
        bits.push_back(static_cast<std::uint8_t>(text[i] - '0'));
    }
    return DyadicExpansion(std::move(bits));
}

DyadicExpansion DyadicExpansion::prefix(std::size_t length) const {
    std::vector<std::uint8_t> bits(length, 0);
    std::copy_n(bits_.begin(), std::min(length, bits_.size()), bits.begin());
    return DyadicExpansion(std::move(bits));
}

Rational DyadicExpansion::value() const {
    mpz_class num = 0;
    for (auto b : bits_) num = 2 * num + b;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, bits_.size());
    return Rational(num, den);
}

std::string DyadicExpansion::digits() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
}

DyadicExpansion expansion_of(const Rational& x) {
    if (x.sign() < 0 || x >= Rational(1)) {
        throw Error(ErrorCode::OutOfRange, x.str() + " is not in [0,1)");
    }
    const long m = power_of_two_exponent(x.denominator());
    if (m < 0) throw Error(ErrorCode::NonDyadicDenominator, x.str());
    // Lowest terms: the numerator is odd unless x = 0, so the m-th digit is the last 1.
    const mpz_class num = x.numerator();
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i) {
        bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(mpz_tstbit(num.get_mpz_t(), static_cast<mp_bitcnt_t>(m - 1 - i)));
    }
    return DyadicExpansion(std::move(bits));
}

int binary_digit(const Rational& x, std::size_t position) {
    if (x.sign() < 0 || x > Rational(1)) throw Error(ErrorCode::OutOfRange, x.str() + " is not in [0,1]");
    if (x == Rational(1)) return 1;
    // floor(x * 2^{position+1}) mod 2
    mpz_class scaled = x.numerator();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), position + 1);
    mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), x.raw().get_den_mpz_t());
    return mpz_tstbit(scaled.get_mpz_t(), 0);
}

RealParam::RealParam(Rational exact) : value_(std::move(exact)) {
    const auto& v = std::get<Rational>(value_);
    if (v.sign() < 0 || v > Rational(1)) throw Error(ErrorCode::OutOfRange, "p = " + v.str() + " is not in [0,1]");
}

RealParam::RealParam(DyadicExpansion prefix) : value_(std::move(prefix)) {}

RealParam RealParam::parse(std::string_view text) {
    if (text.starts_with("0.") || text.starts_with(".")) return RealParam(DyadicExpansion::parse(text));
    return RealParam(Rational::parse(text));
}

const Rational& RealParam::exact() const {
    if (!is_exact()) throw Error(ErrorCode::InsufficientPrecision, "p is only known as the prefix " + str());
    return std::get<Rational>(value_);
}

const DyadicExpansion& RealParam::prefix() const {
    if (is_exact()) throw Error(ErrorCode::InvalidArgument, "p is an exact rational, not a prefix");
    return std::get<DyadicExpansion>(value_);
}

Rational RealParam::lower() const {
    return is_exact() ? std::get<Rational>(value_) : std::get<DyadicExpansion>(value_).value();
}

Rational RealParam::upper() const {
    if (is_exact()) return std::get<Rational>(value_);
    const auto& e = std::get<DyadicExpansion>(value_);
    return e.value() + Rational::pow2_neg(static_cast<unsigned>(e.size()));
}

std::string RealParam::str() const {
    return is_exact() ? std::get<Rational>(value_).str() : std::get<DyadicExpansion>(value_).str();
}

std::string_view to_string(Deviation d) {
    switch (d) {
        case Deviation::GEQ: return "GEQ";
        case Deviation::LT: return "LT";
        case Deviation::UNDECIDED: return "UNDECIDED";
    }
    return "UNDECIDED";
}

Deviation compare_deviation(const Rational& x, const RealParam& p, const Rational& eps) {
    if (eps.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    const Rational lo = p.lower();
    const Rational hi = p.upper();
    // |x - p'| over the closed interval [lo, hi] is convex in p'.
    const Rational to_lo = abs(x - lo);
    const Rational to_hi = abs(x - hi);
    const Rational min_distance = (lo <= x && x <= hi) ? Rational(0) : std::min(to_lo, to_hi);
    const Rational max_distance = std::max(to_lo, to_hi);
    if (min_distance >= eps) return Deviation::GEQ;
    if (max_distance < eps) return Deviation::LT;
    return Deviation::UNDECIDED;
}

}  // namespace hippoc
