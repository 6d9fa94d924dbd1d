#pragma once

// Exact arithmetic: arbitrary rationals (GeneralRational) and dyadic
// rationals p / 2^e (DyadicRational). No floating point is used anywhere.

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace sparsebell {

using BigInt = mpz_class;

/// A rational number p/q kept in lowest terms with q > 0.
class GeneralRational {
 public:
  GeneralRational() = default;

  template <std::signed_integral T>
  GeneralRational(T value) : value_(static_cast<long>(value)) {}  // NOLINT

  template <std::unsigned_integral T>
  GeneralRational(T value) : value_(static_cast<unsigned long>(value)) {}  // NOLINT

  GeneralRational(const BigInt& numerator, const BigInt& denominator);

  explicit GeneralRational(const mpq_class& value);

  /// Accepts "p/q", "p/2^e", integers, and finite decimal literals ("3.2").
  static GeneralRational parse(std::string_view text);

  [[nodiscard]] const mpq_class& get() const { return value_; }
  [[nodiscard]] BigInt numerator() const { return value_.get_num(); }
  [[nodiscard]] BigInt denominator() const { return value_.get_den(); }

  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
  [[nodiscard]] int sign() const { return sgn(value_); }

  [[nodiscard]] BigInt floor() const;
  [[nodiscard]] BigInt ceil() const;
  /// x - floor(x), always in [0, 1).
  [[nodiscard]] GeneralRational frac() const;
  [[nodiscard]] GeneralRational pow(unsigned long exponent) const;

  /// Renders as "p/q"; integers render with q = 1.
  [[nodiscard]] std::string to_string() const;

  friend GeneralRational operator+(const GeneralRational& a, const GeneralRational& b);
  friend GeneralRational operator-(const GeneralRational& a, const GeneralRational& b);
  friend GeneralRational operator*(const GeneralRational& a, const GeneralRational& b);
  friend GeneralRational operator/(const GeneralRational& a, const GeneralRational& b);
  friend GeneralRational operator-(const GeneralRational& a);

  GeneralRational& operator+=(const GeneralRational& b);
  GeneralRational& operator-=(const GeneralRational& b);

  friend bool operator==(const GeneralRational& a, const GeneralRational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const GeneralRational& a, const GeneralRational& b) {
    return cmp(a.value_, b.value_) <=> 0;
  }

 private:
  mpq_class value_{0};
};

/// An exact number numerator / 2^e. Canonical form: numerator odd, or e = 0.
class DyadicRational {
 public:
  DyadicRational() = default;

  template <std::integral T>
  DyadicRational(T value) : numerator_(static_cast<long>(value)) {}  // NOLINT

  DyadicRational(BigInt numerator, unsigned log2_denominator);

  /// Throws PrecisionError when the denominator is not a power of two.
  static DyadicRational from_rational(const GeneralRational& value);
  /// Same accepted syntax as GeneralRational::parse; rejects non-dyadic values.
  static DyadicRational parse(std::string_view text);
  /// 2^k for any integer k.
  static DyadicRational pow2(int k);

  [[nodiscard]] const BigInt& numerator() const { return numerator_; }
  [[nodiscard]] unsigned log2_denominator() const { return exponent_; }

  /// The integer n with value = n / 2^e. Requires e >= log2_denominator().
  [[nodiscard]] BigInt scaled_numerator(unsigned e) const;

  [[nodiscard]] GeneralRational to_rational() const;
  [[nodiscard]] DyadicRational halved() const;
  [[nodiscard]] DyadicRational doubled() const;
  [[nodiscard]] BigInt floor() const;
  [[nodiscard]] DyadicRational frac() const;
  [[nodiscard]] int sign() const { return sgn(numerator_); }
  [[nodiscard]] bool is_zero() const { return numerator_ == 0; }

  /// Renders as "p/2^e".
  [[nodiscard]] std::string to_string() const;

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator-(const DyadicRational& a);

  DyadicRational& operator+=(const DyadicRational& b);

  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    return a.exponent_ == b.exponent_ && a.numerator_ == b.numerator_;
  }
  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);

 private:
  void canonicalize();

  BigInt numerator_{0};
  unsigned exponent_ = 0;
};

/// Exact comparison by cross-multiplication.
std::strong_ordering compare(const DyadicRational& x, const GeneralRational& c);

std::ostream& operator<<(std::ostream& os, const GeneralRational& value);
std::ostream& operator<<(std::ostream& os, const DyadicRational& value);

/// Converts a small integer-valued BigInt, throwing ContractError on overflow.
long to_long(const BigInt& value);

}  // namespace sparsebell
