#include "wfarey/rational.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/integer.hpp>

#include "wfarey/errors.hpp"

namespace wfarey {

namespace {

const BigInt kExactDoubleLimit = BigInt(1) << 53;

BigInt pow10(unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw DomainError("rational with zero denominator");
  normalize();
}

Rational Rational::from_reduced(BigInt n, BigInt d) {
  return Rational(std::move(n), std::move(d), Unchecked{});
}

void Rational::normalize() {
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = 1;
    return;
  }
  BigInt g = boost::multiprecision::gcd(num_, den_);
  if (g != 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> ParseError {
    return ParseError("invalid rational literal '" + std::string(text) + "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational n = parse(text.substr(0, slash));
    Rational d = parse(text.substr(slash + 1));
    if (!n.is_integer() || !d.is_integer()) throw fail();
    if (d.is_zero()) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(n.num(), d.num());
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  BigInt mantissa = 0;
  unsigned frac_digits = 0;
  bool any_digit = false;
  bool in_fraction = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      any_digit = true;
      if (in_fraction) ++frac_digits;
    } else if (c == '.' && !in_fraction) {
      in_fraction = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw fail();
  long exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw fail();
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    if (i >= text.size()) throw fail();
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw fail();
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 4000) throw ParseError("exponent too large in '" + std::string(text) + "'");
    }
    if (exp_negative) exponent = -exponent;
  }
  exponent -= static_cast<long>(frac_digits);
  if (negative) mantissa = -mantissa;
  if (exponent >= 0) return Rational(mantissa * pow10(static_cast<unsigned>(exponent)));
  return Rational(mantissa, pow10(static_cast<unsigned>(-exponent)));
}

double ratio_to_double(const BigInt& num, const BigInt& den) {
  if (abs(num) < kExactDoubleLimit && den < kExactDoubleLimit) {
    return num.convert_to<double>() / den.convert_to<double>();
  }
  boost::multiprecision::cpp_rational q(num, den);
  return q.convert_to<double>();
}

double Rational::to_double() const { return ratio_to_double(num_, den_); }

std::string Rational::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

BigInt Rational::floor() const {
  BigInt q = num_ / den_;  // truncates toward zero
  if (num_.sign() < 0 && q * den_ != num_) q -= 1;
  return q;
}

BigInt Rational::ceil() const {
  BigInt q = num_ / den_;
  if (num_.sign() > 0 && q * den_ != num_) q += 1;
  return q;
}

Rational Rational::operator-() const { return Rational(-num_, den_, Unchecked{}); }

Rational Rational::abs() const { return Rational(num_.sign() < 0 ? BigInt(-num_) : num_, den_, Unchecked{}); }

Rational Rational::reciprocal() const {
  if (num_.is_zero()) throw DomainError("reciprocal of zero");
  return Rational(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational(a.num_ + b.num_, a.den_);
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational(a.num_ - b.num_, a.den_);
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_.is_zero()) throw DomainError("division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  auto order = [](const BigInt& x, const BigInt& y) {
    if (x < y) return std::strong_ordering::less;
    if (y < x) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  };
  if (a.den_ == b.den_) return order(a.num_, b.num_);
  return order(a.num_ * b.den_, b.num_ * a.den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  os << r.num();
  if (r.den() != 1) os << '/' << r.den();
  return os;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational mediant(const Rational& a, const Rational& b) {
  return Rational(a.num() + b.num(), a.den() + b.den());
}

bool is_unimodular(const Rational& a, const Rational& b) {
  return b.num() * a.den() - a.num() * b.den() == 1;
}

UnimodularPair::UnimodularPair(Rational left, Rational right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (!(left_ < right_) || !is_unimodular(left_, right_)) {
    throw NotUnimodularError("pair (" + left_.to_string() + ", " + right_.to_string() +
                             ") is not unimodular");
  }
}

std::optional<UnimodularPair> UnimodularPair::make(Rational left, Rational right) {
  if (!(left < right) || !is_unimodular(left, right)) return std::nullopt;
  return UnimodularPair(std::move(left), std::move(right), Trusted{});
}

Rational UnimodularPair::width() const {
  return Rational::from_reduced(1, left_.den() * right_.den());
}

Rational UnimodularPair::mediant() const {
  // Coprime automatically: the mediant of a unimodular pair is unimodular with both parents.
  return Rational::from_reduced(left_.num() + right_.num(), left_.den() + right_.den());
}

}  // namespace wfarey
