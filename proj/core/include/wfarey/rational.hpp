#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace wfarey {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always stored in lowest terms with a positive
/// denominator. Zero is 0/1.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design of arithmetic
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}  // NOLINT
  Rational(BigInt n, BigInt d);

  /// Wraps a numerator/denominator pair the caller guarantees to be coprime
  /// with d > 0 (e.g. the output of a unimodular recurrence). Skips the gcd.
  static Rational from_reduced(BigInt n, BigInt d);

  /// Parses "p/q", an integer, or a decimal literal such as "-0.125" or
  /// "2.5e-3". Decimals are converted exactly.
  static Rational parse(std::string_view text);

  const BigInt& num() const noexcept { return num_; }
  const BigInt& den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_integer() const noexcept { return den_ == 1; }
  int sign() const noexcept { return num_.sign(); }

  double to_double() const;
  std::string to_string() const;

  BigInt floor() const;
  BigInt ceil() const;

  Rational operator-() const;
  Rational abs() const;
  Rational reciprocal() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  struct Unchecked {};
  Rational(BigInt n, BigInt d, Unchecked) : num_(std::move(n)), den_(std::move(d)) {}
  void normalize();

  BigInt num_;
  BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// (a.num + b.num)/(a.den + b.den), reduced.
Rational mediant(const Rational& a, const Rational& b);

/// True iff b.num*a.den - a.num*b.den == 1.
bool is_unimodular(const Rational& a, const Rational& b);

/// An ordered pair left < right whose 2x2 determinant is exactly 1.
class UnimodularPair {
 public:
  /// Throws NotUnimodularError unless left < right and the determinant is 1.
  UnimodularPair(Rational left, Rational right);
  static std::optional<UnimodularPair> make(Rational left, Rational right);

  const Rational& left() const noexcept { return left_; }
  const Rational& right() const noexcept { return right_; }

  /// right - left, which equals 1/(left.den * right.den).
  Rational width() const;
  Rational mediant() const;

 private:
  struct Trusted {};
  UnimodularPair(Rational l, Rational r, Trusted) : left_(std::move(l)), right_(std::move(r)) {}
  Rational left_;
  Rational right_;
};

/// Converts a BigInt quotient to the nearest double without overflowing
/// when both operands are large.
double ratio_to_double(const BigInt& num, const BigInt& den);

}  // namespace wfarey
