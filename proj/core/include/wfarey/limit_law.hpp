#pragma once

#include <numbers>
#include <optional>
#include <vector>

#include "wfarey/quadrature.hpp"
#include "wfarey/unit.hpp"

namespace wfarey {

/// 2 zeta(2) = pi^2 / 3, shared by every formula that needs it.
inline constexpr double kTwoZeta2 = std::numbers::pi * std::numbers::pi / 3.0;
/// Branch points of the Hall law, 3/pi^2 and 12/pi^2.
inline constexpr double kHallLower = 1.0 / kTwoZeta2;
inline constexpr double kHallUpper = 4.0 / kTwoZeta2;

/// Hall's limiting distribution of normalized Farey gaps.
double hall_cdf(double z);
/// Its density; the left-branch value at the two branch points.
double hall_pdf(double z);

/// One source of a kink: a point of E and the factor (1 or 4) applied to u^2.
struct KinkPreimage {
  ExceptionalPoint point;
  int factor = 1;
  std::optional<Rational> u_squared;  // exact when the point is rational
};

struct Kink {
  double z = 0.0;
  std::vector<KinkPreimage> preimages;
};

/// Weighted gap law H_u, its density h_u and the kink catalog of h_u.
class LimitLaw {
 public:
  explicit LimitLaw(Unit u, double quad_tol = kDefaultQuadTol);

  const Unit& unit() const noexcept { return unit_; }
  const UnitDerived& derived() const noexcept { return derived_; }
  double quad_tol() const noexcept { return quad_tol_; }

  /// H_u(z) = int_0^1 H_1(m(s) z) m(s) ds.
  double cdf(double z) const;
  /// h_u(z) = int_0^1 h_1(m(s) z) m(s)^2 ds.
  double pdf(double z) const;

  const std::vector<Kink>& kinks() const noexcept { return kinks_; }
  std::vector<double> kink_values() const;

  /// Quadrature knots in s for the integrands at a given z.
  std::vector<double> s_knots(double z) const;

 private:
  Unit unit_;
  UnitDerived derived_;
  double quad_tol_;
  std::vector<Kink> kinks_;
};

double weighted_cdf(const LimitLaw& law, double z);
double weighted_pdf(const LimitLaw& law, double z);
std::vector<double> kink_points(const LimitLaw& law);

/// int_0^inf f, split at `knots` and with z = 1/t beyond the largest one.
/// f must decay faster than 1/z.
double integrate_half_line(const RealFn& f, std::vector<double> knots, double tol = kDefaultQuadTol);

}  // namespace wfarey
