#include "wfarey/unit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>
#include <json.hpp>

#include "wfarey/errors.hpp"

namespace wfarey {

namespace {

__extension__ typedef __int128 i128;

const BigInt kInt64Max = BigInt(std::numeric_limits<std::int64_t>::max());

bool fits_int64(const BigInt& x) { return x <= kInt64Max && x >= -kInt64Max; }

std::string describe(const UnitPiece& p, std::size_t i) {
  return "piece " + std::to_string(i) + " on [" + p.from.to_string() + ", " + p.to.to_string() + "]";
}

}  // namespace

// ---------------------------------------------------------------------------
// Unit

Unit::Unit(std::vector<UnitPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw ParseError("a unit needs at least one piece");
  if (pieces_.front().from != Rational(0)) throw ParseError("first piece must start at 0");
  if (pieces_.back().to != Rational(1)) throw ParseError("last piece must end at 1");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!(p.from < p.to)) throw ParseError(describe(p, i) + " has an empty or reversed domain");
    if (i + 1 < pieces_.size() && p.to != pieces_[i + 1].from) {
      throw ParseError("pieces " + std::to_string(i) + " and " + std::to_string(i + 1) +
                       " do not tile [0,1]: " + p.to.to_string() + " != " +
                       pieces_[i + 1].from.to_string());
    }
    if (p.poly.is_zero()) throw PositivityError(describe(p, i) + " is identically zero");
  }
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const Rational& s = pieces_[i].to;
    Rational left = pieces_[i].poly(s);
    Rational right = pieces_[i + 1].poly(s);
    if (left != right) {
      throw ContinuityError("continuity violation at s = " + s.to_string() + ": piece " +
                            std::to_string(i) + " gives " + left.to_string() + ", piece " +
                            std::to_string(i + 1) + " gives " + right.to_string());
    }
  }
  bool first = true;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    auto roots = isolate_roots(p.poly, p.from, p.to);
    if (!roots.empty()) {
      const auto& r = roots.front();
      throw PositivityError(describe(p, i) + " vanishes in [" + r.lo.to_string() + ", " +
                            r.hi.to_string() + "]");
    }
    if (p.poly(p.from).sign() <= 0) throw PositivityError(describe(p, i) + " is negative");
    Enclosure e = range_enclosure(p.poly, p.from, p.to);
    if (first || e.lo < min_lower_) min_lower_ = e.lo;
    if (first || max_upper_ < e.hi) max_upper_ = e.hi;
    first = false;
  }
  if (min_lower_.sign() <= 0) throw PositivityError("unit is too close to zero to bound its minimum");
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) breaks_.push_back(pieces_[i].to.to_double());
}

Unit Unit::constant(const Rational& c) {
  return Unit({UnitPiece{Rational(0), Rational(1), Polynomial({c})}});
}

std::size_t Unit::piece_index(const Rational& s) const {
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i)
    if (s <= pieces_[i].to) return i;
  return pieces_.size() - 1;
}

std::size_t Unit::piece_index(double s) const noexcept {
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), s);
  return static_cast<std::size_t>(it - breaks_.begin());
}

Rational Unit::eval(const Rational& s) const {
  if (s.sign() < 0 || Rational(1) < s) throw DomainError("u evaluated outside [0,1] at " + s.to_string());
  return pieces_[piece_index(s)].poly(s);
}

double Unit::eval(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) {
    std::ostringstream os;
    os << "u evaluated outside [0,1] at " << s;
    throw DomainError(os.str());
  }
  return eval_clamped(s);
}

double Unit::eval_clamped(double s) const noexcept {
  s = std::clamp(s, 0.0, 1.0);
  return pieces_[piece_index(s)].poly(s);
}

Rational Unit::u_denominator(const Rational& s) const { return eval(s) * Rational(s.den()); }

std::string Unit::canonical_json() const {
  nlohmann::json doc;
  doc["pieces"] = nlohmann::json::array();
  for (const auto& p : pieces_) {
    nlohmann::json piece;
    piece["from"] = p.from.to_string();
    piece["to"] = p.to.to_string();
    piece["poly"] = nlohmann::json::array();
    for (const auto& c : p.poly.coeffs()) piece["poly"].push_back(c.to_string());
    if (p.poly.coeffs().empty()) piece["poly"].push_back("0");
    doc["pieces"].push_back(piece);
  }
  return doc.dump();
}

std::string Unit::hash_hex() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// ---------------------------------------------------------------------------
// Exact membership

DenominatorTest::DenominatorTest(const Unit& u, const Rational& Q) : Q_(Q) {
  if (Q.sign() <= 0) throw DomainError("order Q must be positive");
  small_q_ = fits_int64(Q.num()) && fits_int64(Q.den());
  if (small_q_) {
    qn_ = Q.num().convert_to<std::int64_t>();
    qd_ = Q.den().convert_to<std::int64_t>();
  }
  const auto pieces = u.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& coeffs = pieces[i].poly.coeffs();
    Form f;
    f.denom = 1;
    for (const auto& c : coeffs) f.denom = boost::multiprecision::lcm(f.denom, c.den());
    bool small = fits_int64(f.denom);
    for (const auto& c : coeffs) {
      f.coeffs.push_back(c.num() * (f.denom / c.den()));
      small = small && fits_int64(f.coeffs.back());
    }
    if (small) {
      f.small_denom = f.denom.convert_to<std::int64_t>();
      for (const auto& c : f.coeffs) f.small.push_back(c.convert_to<std::int64_t>());
    }
    forms_.push_back(std::move(f));
    if (i + 1 < pieces.size()) {
      Boundary b{pieces[i].to.num(), pieces[i].to.den()};
      if (fits_int64(b.num) && fits_int64(b.den)) {
        b.small_num = b.num.convert_to<std::int64_t>();
        b.small_den = b.den.convert_to<std::int64_t>();
      } else {
        b.small_den = 0;
      }
      upper_.push_back(std::move(b));
    }
  }
}

std::size_t DenominatorTest::locate(std::int64_t p, std::int64_t q) const {
  for (std::size_t i = 0; i < upper_.size(); ++i) {
    const auto& b = upper_[i];
    if (b.small_den == 0) {
      if (BigInt(p) * b.den <= b.num * BigInt(q)) return i;
    } else if (static_cast<i128>(p) * b.small_den <= static_cast<i128>(b.small_num) * q) {
      return i;
    }
  }
  return upper_.size();
}

std::size_t DenominatorTest::locate(const BigInt& p, const BigInt& q) const {
  for (std::size_t i = 0; i < upper_.size(); ++i)
    if (p * upper_[i].den <= upper_[i].num * q) return i;
  return upper_.size();
}

// Qd * sum_j a_j p^j q^(k-j)  <=  Qn * D * q^(k-1)   (k = max(deg, 1)).
bool DenominatorTest::big_test(std::size_t piece, const BigInt& p, const BigInt& q) const {
  const Form& f = forms_[piece];
  const std::size_t deg = f.coeffs.size() - 1;
  BigInt lhs;
  BigInt rhs = Q_.num() * f.denom;
  if (deg == 0) {
    lhs = f.coeffs[0] * q;
  } else {
    lhs = f.coeffs[deg];
    BigInt qpow = 1;
    for (std::size_t j = deg; j-- > 0;) {
      qpow *= q;
      lhs = lhs * p + f.coeffs[j] * qpow;
    }
    for (std::size_t j = 1; j < deg; ++j) rhs *= q;
  }
  return Q_.den() * lhs <= rhs;
}

bool DenominatorTest::operator()(std::int64_t p, std::int64_t q) const {
  const std::size_t piece = locate(p, q);
  const Form& f = forms_[piece];
  if (small_q_ && !f.small.empty()) {
    const std::size_t deg = f.small.size() - 1;
    i128 lhs = 0;
    i128 rhs = 0;
    bool overflow = __builtin_mul_overflow(static_cast<i128>(qn_), static_cast<i128>(f.small_denom), &rhs);
    if (deg == 0) {
      overflow |= __builtin_mul_overflow(static_cast<i128>(f.small[0]), static_cast<i128>(q), &lhs);
    } else {
      lhs = f.small[deg];
      i128 qpow = 1;
      for (std::size_t j = deg; j-- > 0 && !overflow;) {
        i128 term = 0;
        overflow |= __builtin_mul_overflow(qpow, static_cast<i128>(q), &qpow);
        overflow |= __builtin_mul_overflow(static_cast<i128>(f.small[j]), qpow, &term);
        overflow |= __builtin_mul_overflow(lhs, static_cast<i128>(p), &lhs);
        overflow |= __builtin_add_overflow(lhs, term, &lhs);
      }
      for (std::size_t j = 1; j < deg && !overflow; ++j)
        overflow |= __builtin_mul_overflow(rhs, static_cast<i128>(q), &rhs);
    }
    overflow |= __builtin_mul_overflow(lhs, static_cast<i128>(qd_), &lhs);
    if (!overflow) return lhs <= rhs;
  }
  return big_test(piece, BigInt(p), BigInt(q));
}

bool DenominatorTest::operator()(const BigInt& p, const BigInt& q) const {
  if (fits_int64(p) && fits_int64(q)) return (*this)(p.convert_to<std::int64_t>(), q.convert_to<std::int64_t>());
  return big_test(locate(p, q), p, q);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

Rational json_rational(const nlohmann::json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw ParseError(where + ": expected a rational string such as \"3/4\" or \"0.75\"");
}

}  // namespace

Unit parse_unit(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("unit document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("pieces") || !doc["pieces"].is_array())
    throw ParseError("unit document needs a top-level \"pieces\" list");
  std::vector<UnitPiece> pieces;
  std::size_t i = 0;
  for (const auto& jp : doc["pieces"]) {
    const std::string where = "piece " + std::to_string(i);
    if (!jp.is_object() || !jp.contains("from") || !jp.contains("to") || !jp.contains("poly"))
      throw ParseError(where + ": needs \"from\", \"to\" and \"poly\"");
    if (!jp["poly"].is_array() || jp["poly"].empty())
      throw ParseError(where + ": \"poly\" must be a non-empty list of coefficients");
    std::vector<Rational> coeffs;
    std::size_t k = 0;
    for (const auto& c : jp["poly"]) coeffs.push_back(json_rational(c, where + " coefficient " + std::to_string(k++)));
    pieces.push_back(UnitPiece{json_rational(jp["from"], where + " \"from\""),
                               json_rational(jp["to"], where + " \"to\""), Polynomial(std::move(coeffs))});
    ++i;
  }
  return Unit(std::move(pieces));
}

Unit load_unit(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open unit file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_unit(buf.str());
}

// ---------------------------------------------------------------------------
// Derived quantities

namespace {

// Root of u(s) = level on [a, b] where u is monotone; never throws, clamps
// to the nearer endpoint if rounding puts level just outside the range.
double solve_u_level(const Polynomial& poly, double a, double b, double level) {
  auto g = [&](double s) { return poly(s) - level; };
  double ga = g(a);
  double gb = g(b);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  if ((ga > 0) == (gb > 0)) return std::abs(ga) < std::abs(gb) ? a : b;
  auto narrow = [](double lo, double hi) { return std::abs(hi - lo) <= kDefaultBisectionTol * 1e-3; };
  std::uintmax_t iters = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(g, a, b, ga, gb, narrow, iters);
  return 0.5 * (lo + hi);
}

struct CriticalPoint {
  RootInterval iv;
  double s;
  bool extremum;
};

}  // namespace

double UnitDerived::m(const Unit& u, double s) const {
  const double v = 1.0 / u.eval_clamped(s);
  return v * v / C;
}

std::vector<double> UnitDerived::knots() const {
  std::vector<double> k;
  for (const auto& mp : monotone_pieces) k.push_back(mp.from);
  return clean_knots(std::move(k), 0.0, 1.0);
}

UnitDerived derive(const Unit& u, double tol) {
  UnitDerived d;
  d.quad_tol = tol;
  const auto pieces = u.pieces();
  auto add_exact = [&](const Rational& s, ExceptionalPoint::Kind kind) {
    d.E.push_back(ExceptionalPoint{s.to_double(), s, RootInterval{s, s}, kind});
  };
  add_exact(Rational(0), ExceptionalPoint::Kind::endpoint);

  double min_u = std::numeric_limits<double>::infinity();
  double max_u = 0.0;
  auto track = [&](double value) {
    min_u = std::min(min_u, value);
    max_u = std::max(max_u, value);
  };

  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& piece = pieces[i];
    const Polynomial du = piece.poly.derivative();
    track(piece.poly(piece.from).to_double());
    track(piece.poly(piece.to).to_double());

    std::vector<CriticalPoint> crit;
    if (!du.is_zero()) {
      for (const auto& iv : isolate_roots(du, piece.from, piece.to)) {
        if (iv.exact() && (iv.lo == piece.from || iv.lo == piece.to)) continue;
        bool extremum;
        if (iv.exact()) extremum = root_multiplicity(du, iv.lo) % 2 == 1;
        else extremum = du(iv.lo).sign() != du(iv.hi).sign();
        crit.push_back({iv, root_to_double(du, iv), extremum});
      }
    }
    for (const auto& c : crit) {
      track(piece.poly(c.s));
      if (c.extremum) {
        ExceptionalPoint e{c.s, std::nullopt, c.iv, ExceptionalPoint::Kind::extremum};
        if (c.iv.exact()) e.exact = c.iv.lo;
        d.E.push_back(std::move(e));
      }
    }

    // Monotone decomposition of v on this piece, split at every critical point.
    std::vector<double> cuts{piece.from.to_double()};
    std::vector<Rational> probe_lo{piece.from};
    std::vector<Rational> probe_hi;
    for (const auto& c : crit) {
      cuts.push_back(c.s);
      probe_hi.push_back(c.iv.lo);
      probe_lo.push_back(c.iv.hi);
    }
    cuts.push_back(piece.to.to_double());
    probe_hi.push_back(piece.to);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      MonotonePiece mp;
      mp.from = cuts[k];
      mp.to = cuts[k + 1];
      mp.unit_piece = i;
      if (du.is_zero()) {
        mp.direction = Monotonicity::constant;
      } else {
        int sgn = du((probe_lo[k] + probe_hi[k]) / Rational(2)).sign();
        mp.direction = sgn > 0 ? Monotonicity::decreasing : Monotonicity::increasing;
      }
      mp.v_from = 1.0 / piece.poly(mp.from);
      mp.v_to = 1.0 / piece.poly(mp.to);
      if (mp.direction == Monotonicity::constant) mp.v_to = mp.v_from = 1.0 / piece.poly.coeffs()[0].to_double();
      d.monotone_pieces.push_back(mp);
    }

    if (i + 1 < pieces.size() && !(piece.poly == pieces[i + 1].poly))
      add_exact(piece.to, ExceptionalPoint::Kind::breakpoint);
  }
  add_exact(Rational(1), ExceptionalPoint::Kind::endpoint);
  std::sort(d.E.begin(), d.E.end(), [](const auto& a, const auto& b) { return a.s < b.s; });

  d.min_u = min_u;
  d.max_u = max_u;
  d.l = 1.0 / max_u;
  d.L = 1.0 / min_u;

  auto v2 = [&u](double s) {
    const double x = u.eval_clamped(s);
    return 1.0 / (x * x);
  };
  d.C = integrate(QuadratureRequest{v2, 0.0, 1.0, d.knots(), tol, kDefaultMaxSubdivisions}).value;
  return d;
}

// ---------------------------------------------------------------------------
// Pushforward of Lebesgue measure by v

double pushforward_cdf(const UnitDerived& d, const Unit& u, double w) {
  const auto pieces = u.pieces();
  double total = 0.0;
  for (const auto& mp : d.monotone_pieces) {
    const double len = mp.to - mp.from;
    switch (mp.direction) {
      case Monotonicity::constant:
        if (mp.v_from < w) total += len;
        break;
      case Monotonicity::increasing:
        if (w <= mp.v_from) break;
        if (w > mp.v_to) {
          total += len;
        } else {
          total += solve_u_level(pieces[mp.unit_piece].poly, mp.from, mp.to, 1.0 / w) - mp.from;
        }
        break;
      case Monotonicity::decreasing:
        if (w <= mp.v_to) break;
        if (w > mp.v_from) {
          total += len;
        } else {
          total += mp.to - solve_u_level(pieces[mp.unit_piece].poly, mp.from, mp.to, 1.0 / w);
        }
        break;
    }
  }
  return std::clamp(total, 0.0, 1.0);
}

double pushforward_mass(const UnitDerived& d, const Unit& u, double a, double b) {
  if (!(b > a)) return 0.0;
  return std::max(0.0, pushforward_cdf(d, u, b) - pushforward_cdf(d, u, a));
}

std::vector<double> v_level_crossings(const UnitDerived& d, const Unit& u, double w) {
  std::vector<double> out;
  const auto pieces = u.pieces();
  for (const auto& mp : d.monotone_pieces) {
    if (mp.direction == Monotonicity::constant) continue;
    const double lo = std::min(mp.v_from, mp.v_to);
    const double hi = std::max(mp.v_from, mp.v_to);
    if (w < lo || w > hi) continue;
    out.push_back(solve_u_level(pieces[mp.unit_piece].poly, mp.from, mp.to, 1.0 / w));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double m_mass(const UnitDerived& d, const Unit& u, double a, double b) {
  if (!(b > a)) return 0.0;
  auto m = [&](double s) { return d.m(u, s); };
  return integrate(QuadratureRequest{m, a, b, d.knots(), d.quad_tol, kDefaultMaxSubdivisions}).value;
}

}  // namespace wfarey
