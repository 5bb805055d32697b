#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace wfarey {

using RealFn = std::function<double(double)>;

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr double kDefaultBisectionTol = 1e-12;
inline constexpr int kDefaultMaxSubdivisions = 10000;

/// One adaptive integration over [a, b]. The integrand only needs to be
/// finite on the open panels between forced knots; it is never evaluated
/// at a knot or at an endpoint.
struct QuadratureRequest {
  RealFn integrand;
  double a = 0.0;
  double b = 1.0;
  std::vector<double> forced_knots;
  double tol = kDefaultQuadTol;
  int max_subdivisions = kDefaultMaxSubdivisions;
};

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  int panels = 0;
  long evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature. The initial panels
/// are the knot-split subintervals, each reparametrized so the map is flat
/// at ends lying on a forced knot; the panel with the largest
/// |K15 - G7| is bisected until the summed bound is <= tol. Panel sums
/// are combined left to right with compensated summation, so the result
/// does not depend on refinement order. Throws QuadratureError when the
/// subdivision budget runs out.
QuadratureResult integrate(const QuadratureRequest& req);

/// Shorthand returning only the value.
double integrate(const RealFn& f, double a, double b, std::vector<double> knots = {},
                 double tol = kDefaultQuadTol);

/// Fixed 15-point Kronrod rule on [a, b]; for short panels of smooth
/// integrands where adaptivity is wasted.
double kronrod15(const RealFn& f, double a, double b);

/// Sorts, deduplicates (within 1e-15 relative) and keeps only knots strictly
/// inside (a, b).
std::vector<double> clean_knots(std::vector<double> knots, double a, double b);

/// Solves f(s) = target for f monotone on [a, b], bracketing until the
/// bracket is narrower than tol. Throws DomainError when target lies
/// outside [min(f(a), f(b)), max(f(a), f(b))].
double invert_monotone(const RealFn& f, double a, double b, double target,
                       double tol = kDefaultBisectionTol);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace wfarey
