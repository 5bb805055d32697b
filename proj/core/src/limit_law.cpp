#include "wfarey/limit_law.hpp"

#include <algorithm>
#include <cmath>

#include "wfarey/errors.hpp"

namespace wfarey {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

}  // namespace

double hall_cdf(double z) {
  if (z <= kHallLower) return 0.0;
  const double a = kPi2 * z;
  if (z <= kHallUpper) return 2.0 - 6.0 * (1.0 + std::log(a / 3.0)) / a;
  const double r = std::sqrt(0.25 - 3.0 / a);
  return 2.0 - 6.0 / a - 2.0 * r + 12.0 * std::log(0.5 + r) / a;
}

double hall_pdf(double z) {
  if (z <= kHallLower) return 0.0;
  const double a = kPi2 * z;
  if (z <= kHallUpper) return 6.0 * std::log(a / 3.0) / (a * z);
  const double r = std::sqrt(0.25 - 3.0 / a);
  return -12.0 * std::log(0.5 + r) / (a * z);
}

LimitLaw::LimitLaw(Unit u, double quad_tol)
    : unit_(std::move(u)), derived_(derive(unit_, quad_tol)), quad_tol_(quad_tol) {
  const double scale = derived_.C / kTwoZeta2;
  std::vector<Kink> raw;
  for (const auto& e : derived_.E) {
    std::optional<Rational> u2;
    double u2d;
    if (e.exact) {
      const Rational val = unit_.eval(*e.exact);
      u2 = val * val;
      u2d = u2->to_double();
    } else {
      const double val = unit_.eval(e.s);
      u2d = val * val;
    }
    for (int factor : {1, 4}) {
      std::optional<Rational> scaled;
      if (u2) scaled = *u2 * Rational(factor);
      raw.push_back(Kink{scale * factor * u2d, {KinkPreimage{e, factor, scaled}}});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const Kink& a, const Kink& b) { return a.z < b.z; });
  for (auto& k : raw) {
    if (!kinks_.empty()) {
      Kink& last = kinks_.back();
      const auto& a = last.preimages.front().u_squared;
      const auto& b = k.preimages.front().u_squared;
      const bool same = (a && b) ? *a == *b : std::abs(last.z - k.z) <= 1e-12 * std::max(1.0, k.z);
      if (same) {
        last.preimages.push_back(k.preimages.front());
        continue;
      }
    }
    kinks_.push_back(std::move(k));
  }
}

std::vector<double> LimitLaw::kink_values() const {
  std::vector<double> out;
  for (const auto& k : kinks_) out.push_back(k.z);
  return out;
}

std::vector<double> LimitLaw::s_knots(double z) const {
  std::vector<double> knots = derived_.knots();
  if (z > 0) {
    for (double level : {kHallLower, kHallUpper}) {
      const auto s = v_level_crossings(derived_, unit_, std::sqrt(level * derived_.C / z));
      knots.insert(knots.end(), s.begin(), s.end());
    }
  }
  return clean_knots(std::move(knots), 0.0, 1.0);
}

double LimitLaw::cdf(double z) const {
  if (z <= 0.0) return 0.0;
  const double m_max = derived_.L * derived_.L / derived_.C;
  if (m_max * z <= kHallLower) return 0.0;
  auto f = [&](double s) {
    const double m = derived_.m(unit_, s);
    return hall_cdf(m * z) * m;
  };
  const double v = integrate(QuadratureRequest{f, 0.0, 1.0, s_knots(z), quad_tol_, kDefaultMaxSubdivisions}).value;
  return std::clamp(v, 0.0, 1.0);
}

double LimitLaw::pdf(double z) const {
  if (z <= 0.0) return 0.0;
  const double m_max = derived_.L * derived_.L / derived_.C;
  if (m_max * z <= kHallLower) return 0.0;
  auto f = [&](double s) {
    const double m = derived_.m(unit_, s);
    return hall_pdf(m * z) * m * m;
  };
  const double v = integrate(QuadratureRequest{f, 0.0, 1.0, s_knots(z), quad_tol_, kDefaultMaxSubdivisions}).value;
  return std::max(v, 0.0);
}

double weighted_cdf(const LimitLaw& law, double z) { return law.cdf(z); }
double weighted_pdf(const LimitLaw& law, double z) { return law.pdf(z); }
std::vector<double> kink_points(const LimitLaw& law) { return law.kink_values(); }

double integrate_half_line(const RealFn& f, std::vector<double> knots, double tol) {
  knots.erase(std::remove_if(knots.begin(), knots.end(), [](double k) { return !(k > 0.0); }), knots.end());
  const double z0 = knots.empty() ? 1.0 : *std::max_element(knots.begin(), knots.end());
  const double head = integrate(QuadratureRequest{f, 0.0, z0, clean_knots(knots, 0.0, z0), tol / 2, kDefaultMaxSubdivisions}).value;
  auto g = [&](double t) { return f(1.0 / t) / (t * t); };
  const double tail = integrate(QuadratureRequest{g, 0.0, 1.0 / z0, {}, tol / 2, kDefaultMaxSubdivisions}).value;
  return head + tail;
}

}  // namespace wfarey
