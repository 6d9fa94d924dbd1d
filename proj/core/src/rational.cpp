#include "sparsebell/rational.hpp"

#include <cctype>
#include <climits>
#include <ostream>
#include <utility>

#include "sparsebell/errors.hpp"

namespace sparsebell {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw ParseError("malformed rational '" + std::string(whole) + "'");
  }
  BigInt out(std::string(s), 10);
  return negative ? BigInt(-out) : out;
}

// Denominators may be written "q" or "2^e".
BigInt parse_denominator(std::string_view s, std::string_view whole) {
  if (const auto caret = s.find('^'); caret != std::string_view::npos) {
    if (trim(s.substr(0, caret)) != "2" || !all_digits(trim(s.substr(caret + 1)))) {
      throw ParseError("malformed power-of-two denominator in '" + std::string(whole) + "'");
    }
    const BigInt e(std::string(trim(s.substr(caret + 1))), 10);
    if (e > 1u << 20) throw ParseError("exponent too large in '" + std::string(whole) + "'");
    BigInt out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2, e.get_ui());
    return out;
  }
  if (!all_digits(s)) {
    throw ParseError("malformed denominator in '" + std::string(whole) + "'");
  }
  return BigInt(std::string(s), 10);
}

}  // namespace

// ---------------------------------------------------------------- General

GeneralRational::GeneralRational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) throw DomainError("rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

GeneralRational::GeneralRational(const mpq_class& value) : value_(value) {
  value_.canonicalize();
}

GeneralRational GeneralRational::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty rational");

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(trim(s.substr(0, slash)), s);
    const BigInt den = parse_denominator(trim(s.substr(slash + 1)), s);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    return {num, den};
  }

  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    const std::string_view frac_part = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      throw ParseError("malformed decimal '" + std::string(s) + "'");
    }
    const std::string digits = std::string(int_part) + std::string(frac_part);
    BigInt num(digits, 10);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
    if (negative) num = -num;
    return {num, den};
  }

  return {parse_integer(s, s), BigInt(1)};
}

BigInt GeneralRational::floor() const {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return out;
}

BigInt GeneralRational::ceil() const {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return out;
}

GeneralRational GeneralRational::frac() const {
  return *this - GeneralRational(floor(), BigInt(1));
}

GeneralRational GeneralRational::pow(unsigned long exponent) const {
  BigInt num;
  BigInt den;
  mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), exponent);
  return {num, den};
}

std::string GeneralRational::to_string() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

GeneralRational operator+(const GeneralRational& a, const GeneralRational& b) {
  return GeneralRational(mpq_class(a.value_ + b.value_));
}
GeneralRational operator-(const GeneralRational& a, const GeneralRational& b) {
  return GeneralRational(mpq_class(a.value_ - b.value_));
}
GeneralRational operator*(const GeneralRational& a, const GeneralRational& b) {
  return GeneralRational(mpq_class(a.value_ * b.value_));
}
GeneralRational operator/(const GeneralRational& a, const GeneralRational& b) {
  if (b.value_ == 0) throw DomainError("division by zero");
  return GeneralRational(mpq_class(a.value_ / b.value_));
}
GeneralRational operator-(const GeneralRational& a) { return GeneralRational(mpq_class(-a.value_)); }

GeneralRational& GeneralRational::operator+=(const GeneralRational& b) {
  value_ += b.value_;
  return *this;
}
GeneralRational& GeneralRational::operator-=(const GeneralRational& b) {
  value_ -= b.value_;
  return *this;
}

// ---------------------------------------------------------------- Dyadic

DyadicRational::DyadicRational(BigInt numerator, unsigned log2_denominator)
    : numerator_(std::move(numerator)), exponent_(log2_denominator) {
  canonicalize();
}

void DyadicRational::canonicalize() {
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  if (exponent_ == 0) return;
  const auto twos = static_cast<unsigned>(mpz_scan1(numerator_.get_mpz_t(), 0));
  const unsigned shift = twos < exponent_ ? twos : exponent_;
  if (shift > 0) {
    mpz_fdiv_q_2exp(numerator_.get_mpz_t(), numerator_.get_mpz_t(), shift);
    exponent_ -= shift;
  }
}

DyadicRational DyadicRational::from_rational(const GeneralRational& value) {
  const BigInt den = value.denominator();
  if (mpz_popcount(den.get_mpz_t()) != 1) {
    throw PrecisionError("value " + value.to_string() + " is not a dyadic rational");
  }
  const auto e = static_cast<unsigned>(mpz_scan1(den.get_mpz_t(), 0));
  return {value.numerator(), e};
}

DyadicRational DyadicRational::parse(std::string_view text) {
  return from_rational(GeneralRational::parse(text));
}

DyadicRational DyadicRational::pow2(int k) {
  if (k >= 0) {
    BigInt n;
    mpz_ui_pow_ui(n.get_mpz_t(), 2, static_cast<unsigned long>(k));
    return {n, 0};
  }
  return {BigInt(1), static_cast<unsigned>(-k)};
}

BigInt DyadicRational::scaled_numerator(unsigned e) const {
  if (e < exponent_) {
    throw PrecisionError(to_string() + " is not representable with denominator 2^" +
                         std::to_string(e));
  }
  BigInt out;
  mpz_mul_2exp(out.get_mpz_t(), numerator_.get_mpz_t(), e - exponent_);
  return out;
}

GeneralRational DyadicRational::to_rational() const {
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, exponent_);
  return {numerator_, den};
}

DyadicRational DyadicRational::halved() const {
  if (numerator_ == 0) return {};
  return {numerator_, exponent_ + 1};
}

DyadicRational DyadicRational::doubled() const {
  if (exponent_ > 0) return {numerator_, exponent_ - 1};
  return {BigInt(numerator_ * 2), 0};
}

BigInt DyadicRational::floor() const {
  BigInt out;
  mpz_fdiv_q_2exp(out.get_mpz_t(), numerator_.get_mpz_t(), exponent_);
  return out;
}

DyadicRational DyadicRational::frac() const { return *this - DyadicRational(floor(), 0); }

std::string DyadicRational::to_string() const {
  return numerator_.get_str() + "/2^" + std::to_string(exponent_);
}

DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
  const unsigned e = a.exponent_ > b.exponent_ ? a.exponent_ : b.exponent_;
  return {a.scaled_numerator(e) + b.scaled_numerator(e), e};
}

DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
  const unsigned e = a.exponent_ > b.exponent_ ? a.exponent_ : b.exponent_;
  return {a.scaled_numerator(e) - b.scaled_numerator(e), e};
}

DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
  return {a.numerator_ * b.numerator_, a.exponent_ + b.exponent_};
}

DyadicRational operator-(const DyadicRational& a) { return {BigInt(-a.numerator_), a.exponent_}; }

DyadicRational& DyadicRational::operator+=(const DyadicRational& b) {
  *this = *this + b;
  return *this;
}

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
  const unsigned e = a.exponent_ > b.exponent_ ? a.exponent_ : b.exponent_;
  return cmp(a.scaled_numerator(e), b.scaled_numerator(e)) <=> 0;
}

std::strong_ordering compare(const DyadicRational& x, const GeneralRational& c) {
  // x.num / 2^e  vs  c.num / c.den   <=>   x.num * c.den  vs  c.num * 2^e
  BigInt lhs = x.numerator() * c.denominator();
  BigInt rhs;
  mpz_mul_2exp(rhs.get_mpz_t(), c.numerator().get_mpz_t(), x.log2_denominator());
  return cmp(lhs, rhs) <=> 0;
}

std::ostream& operator<<(std::ostream& os, const GeneralRational& value) {
  return os << value.to_string();
}

std::ostream& operator<<(std::ostream& os, const DyadicRational& value) {
  return os << value.to_string();
}

long to_long(const BigInt& value) {
  if (!value.fits_slong_p()) throw ContractError("integer " + value.get_str() + " out of range");
  return value.get_si();
}

}  // namespace sparsebell
