#pragma once

#include <utility>
#include <vector>

#include "wfarey/rational.hpp"

namespace wfarey {

/// Univariate polynomial with exact rational coefficients in the monomial
/// basis; coeffs()[k] multiplies x^k. Trailing zeros are trimmed, so the
/// zero polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  const Rational& leading() const { return coeffs_.back(); }

  Rational operator()(const Rational& x) const;
  double operator()(double x) const;

  Polynomial derivative() const;
  /// p(x + shift).
  Polynomial taylor_shift(const Rational& shift) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  /// Euclidean division; throws DomainError on a zero divisor.
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
  /// Monic greatest common divisor (zero if both are zero).
  static Polynomial gcd(Polynomial a, Polynomial b);

  /// p / gcd(p, p'): same distinct roots, all simple.
  Polynomial square_free() const;
  Polynomial monic() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
  std::vector<double> approx_;
};

/// A closed rational interval holding exactly one real root. lo == hi
/// means the root is known exactly.
struct RootInterval {
  Rational lo;
  Rational hi;
  bool exact() const { return lo == hi; }
};

/// Isolates every real root of p in the closed interval [lo, hi] by Sturm
/// sequences and exact bisection. Intervals are returned sorted, and
/// distinct intervals share at most an endpoint that is not a root.
/// Throws DomainError for the zero polynomial.
std::vector<RootInterval> isolate_roots(const Polynomial& p, const Rational& lo, const Rational& hi);

/// Shrinks an isolating interval of p to width <= width.
RootInterval refine_root(const Polynomial& p, RootInterval iv, const Rational& width);

/// Double approximation of an isolated root (refined to ~1e-17 relative).
double root_to_double(const Polynomial& p, const RootInterval& iv);

/// Multiplicity of r as a root of p (0 if p(r) != 0).
int root_multiplicity(const Polynomial& p, const Rational& r);

/// Rigorous rational enclosure of {p(x) : x in [a, b]}.
struct Enclosure {
  Rational lo;
  Rational hi;
};
Enclosure range_enclosure(const Polynomial& p, const Rational& a, const Rational& b);

}  // namespace wfarey
