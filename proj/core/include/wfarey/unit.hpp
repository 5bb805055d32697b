#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wfarey/polynomial.hpp"
#include "wfarey/quadrature.hpp"
#include "wfarey/rational.hpp"

namespace wfarey {

/// One polynomial piece of a unit, valid on the closed interval [from, to].
struct UnitPiece {
  Rational from;
  Rational to;
  Polynomial poly;
};

/// A continuous, strictly positive, piecewise-polynomial weight u on [0, 1].
/// Construction validates tiling, continuity and positivity exactly, so a
/// Unit object is always valid.
class Unit {
 public:
  /// Throws ParseError (tiling), ContinuityError or PositivityError.
  explicit Unit(std::vector<UnitPiece> pieces);

  /// u == c on [0, 1].
  static Unit constant(const Rational& c);

  std::span<const UnitPiece> pieces() const noexcept { return pieces_; }

  /// Exact value at a rational point; DomainError outside [0, 1].
  Rational eval(const Rational& s) const;
  /// Floating value; DomainError outside [0, 1].
  double eval(double s) const;
  /// Unchecked floating value, clamped into [0, 1]; hot-path helper.
  double eval_clamped(double s) const noexcept;

  /// Exact u-denominator u(p/q) * q.
  Rational u_denominator(const Rational& s) const;

  /// Rigorous rational bounds: min_lower() <= min u and max u <= max_upper().
  const Rational& min_lower() const noexcept { return min_lower_; }
  const Rational& max_upper() const noexcept { return max_upper_; }

  /// Canonical text form (also the unit-file JSON) and its FNV-1a hash.
  std::string canonical_json() const;
  std::string hash_hex() const;

  std::size_t piece_index(const Rational& s) const;
  std::size_t piece_index(double s) const noexcept;

 private:
  std::vector<UnitPiece> pieces_;
  std::vector<double> breaks_;  // double images of interior piece boundaries
  Rational min_lower_;
  Rational max_upper_;
};

/// Exact test of u(p/q) * q <= Q for reduced p/q in [0, 1], with the
/// unit's coefficients and Q pre-scaled to integers. Uses checked 128-bit
/// arithmetic when the operands are small and falls back to BigInt on
/// overflow, so the answer is always exact.
class DenominatorTest {
 public:
  DenominatorTest(const Unit& u, const Rational& Q);

  bool operator()(std::int64_t p, std::int64_t q) const;
  bool operator()(const BigInt& p, const BigInt& q) const;
  bool operator()(const Rational& s) const { return (*this)(s.num(), s.den()); }

  const Rational& order() const noexcept { return Q_; }

 private:
  struct Form {
    std::vector<BigInt> coeffs;  // u = (sum coeffs[k] x^k) / denom on the piece
    BigInt denom;
    std::vector<std::int64_t> small;  // filled when every value fits
    std::int64_t small_denom = 0;
  };
  struct Boundary {
    BigInt num, den;
    std::int64_t small_num = 0, small_den = 0;
  };

  std::size_t locate(std::int64_t p, std::int64_t q) const;
  std::size_t locate(const BigInt& p, const BigInt& q) const;
  bool big_test(std::size_t piece, const BigInt& p, const BigInt& q) const;

  Rational Q_;
  std::vector<Form> forms_;
  std::vector<Boundary> upper_;  // right endpoint of each piece but the last
  bool small_q_ = false;
  std::int64_t qn_ = 0, qd_ = 0;
};

/// Parses the unit-file schema:
///   {"pieces": [{"from": "0", "to": "1/5", "poly": ["1/2", "5/2"]}, ...]}
/// Endpoints and coefficients are rational ("p/q") or decimal strings,
/// converted exactly; poly[k] multiplies s^k.
Unit parse_unit(std::string_view document);
Unit load_unit(const std::filesystem::path& path);

/// A point of the exceptional set E: exact when rational, otherwise an
/// isolating interval plus a double approximation.
struct ExceptionalPoint {
  double s = 0.0;
  std::optional<Rational> exact;
  RootInterval isolation;
  enum class Kind { endpoint, breakpoint, extremum } kind = Kind::endpoint;
};

enum class Monotonicity { increasing, decreasing, constant };

/// Maximal subinterval on which v = 1/u is strictly monotone or constant.
struct MonotonePiece {
  double from = 0.0;
  double to = 0.0;
  std::size_t unit_piece = 0;
  Monotonicity direction = Monotonicity::constant;
  double v_from = 0.0;
  double v_to = 0.0;
};

/// Quantities derived from u: C = int v^2, l = min v, L = max v, E, and
/// the monotone decomposition of v.
struct UnitDerived {
  double C = 0.0;
  double l = 0.0;
  double L = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  std::vector<ExceptionalPoint> E;
  std::vector<MonotonePiece> monotone_pieces;
  double quad_tol = kDefaultQuadTol;

  /// m(s) = v(s)^2 / C.
  double m(const Unit& u, double s) const;
  /// Every s at which v may fail to be smooth or monotone (piece boundaries
  /// and monotone-piece boundaries, endpoints excluded).
  std::vector<double> knots() const;
};

/// Throws QuadratureError if C cannot be resolved to tol.
UnitDerived derive(const Unit& u, double tol = kDefaultQuadTol);

/// lambda{s in [0,1] : v(s) < w}; the distribution function of v_* lambda.
double pushforward_cdf(const UnitDerived& d, const Unit& u, double w);

/// (v_* lambda)([a, b)) = lambda{s : a <= v(s) < b}; 0 when b <= a.
double pushforward_mass(const UnitDerived& d, const Unit& u, double a, double b);

/// Every s (sorted) with v(s) == w, at most one per strictly monotone piece.
std::vector<double> v_level_crossings(const UnitDerived& d, const Unit& u, double w);

/// int_a^b m(s) ds.
double m_mass(const UnitDerived& d, const Unit& u, double a, double b);

}  // namespace wfarey
