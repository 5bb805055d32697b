#include "wfarey/polynomial.hpp"

#include <algorithm>

#include "wfarey/errors.hpp"

namespace wfarey {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  approx_.clear();
  approx_.reserve(coeffs_.size());
  for (const auto& c : coeffs_) approx_.push_back(c.to_double());
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = approx_.rbegin(); it != approx_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d;
  d.reserve(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(coeffs_[k] * Rational(static_cast<std::int64_t>(k)));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::taylor_shift(const Rational& shift) const {
  // Horner in the ring: acc <- acc*(x + shift) + c_k.
  std::vector<Rational> acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    std::vector<Rational> next(acc.size() + 1);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k + 1] += acc[k];
      next[k] += acc[k] * shift;
    }
    next[0] += *it;
    acc = std::move(next);
  }
  return Polynomial(std::move(acc));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] -= b.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Rational& s, const Polynomial& p) {
  std::vector<Rational> c(p.coeffs_);
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Rational> rem(a.coeffs_);
  const int db = b.degree();
  if (a.degree() < db) return {Polynomial{}, a};
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - db + 1));
  for (int k = a.degree(); k >= db; --k) {
    const Rational& lead = rem[static_cast<std::size_t>(k)];
    if (lead.is_zero()) continue;
    Rational f = lead / b.leading();
    quot[static_cast<std::size_t>(k - db)] = f;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= f * b.coeffs_[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  return leading().reciprocal() * *this;
}

Polynomial Polynomial::gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Polynomial Polynomial::square_free() const {
  if (degree() <= 1) return monic();
  Polynomial g = gcd(*this, derivative());
  return divmod(*this, g).first.monic();
}

namespace {

class SturmChain {
 public:
  explicit SturmChain(const Polynomial& sqf) {
    chain_.push_back(sqf);
    chain_.push_back(sqf.derivative());
    while (!chain_.back().is_zero()) {
      Polynomial r = Polynomial::divmod(chain_[chain_.size() - 2], chain_.back()).second;
      if (r.is_zero()) break;
      chain_.push_back(Rational(-1) * r);
    }
    if (chain_.back().is_zero()) chain_.pop_back();
  }

  // Sign variations with zeros dropped; equals V(x+) when x is a root of chain[0].
  int variations(const Rational& x) const {
    int count = 0;
    int last = 0;
    for (const auto& p : chain_) {
      int s = p(x).sign();
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  // Number of distinct roots in the open interval (a, b).
  int count_open(const Rational& a, const Rational& b) const {
    int n = variations(a) - variations(b);
    if (chain_[0](b).is_zero()) --n;
    return n;
  }

  const Polynomial& base() const { return chain_[0]; }

 private:
  std::vector<Polynomial> chain_;
};

Rational midpoint(const Rational& a, const Rational& b) { return (a + b) / Rational(2); }

}  // namespace

std::vector<RootInterval> isolate_roots(const Polynomial& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw DomainError("root isolation of the zero polynomial");
  if (hi < lo) throw DomainError("root isolation on an empty interval");
  std::vector<RootInterval> out;
  if (p.degree() == 0) return out;
  if (p.degree() == 1) {
    Rational r = -p.coeffs()[0] / p.coeffs()[1];
    if (lo <= r && r <= hi) out.push_back({r, r});
    return out;
  }

  const SturmChain chain(p.square_free());
  const Polynomial& f = chain.base();
  const bool lo_root = f(lo).is_zero();
  const bool hi_root = lo != hi && f(hi).is_zero();
  if (lo_root) out.push_back({lo, lo});
  if (lo == hi) return out;

  // Left-to-right recursion keeps the output sorted.
  auto isolate = [&](auto&& self, Rational a, Rational b) -> void {
    int n = chain.count_open(a, b);
    if (n == 0) return;
    if (n == 1) {
      // Pull endpoints that are themselves roots away from the root.
      while (f(a).is_zero() || f(b).is_zero()) {
        Rational m = midpoint(a, b);
        if (f(m).is_zero()) {
          a = m;
          b = m;
          break;
        }
        if (chain.count_open(a, m) == 1) b = std::move(m);
        else a = std::move(m);
      }
      out.push_back({std::move(a), std::move(b)});
      return;
    }
    Rational m = midpoint(a, b);
    self(self, a, m);
    if (f(m).is_zero()) out.push_back({m, m});
    self(self, m, b);
  };
  isolate(isolate, lo, hi);
  if (hi_root) out.push_back({hi, hi});
  return out;
}

RootInterval refine_root(const Polynomial& p, RootInterval iv, const Rational& width) {
  if (iv.exact() || iv.hi - iv.lo <= width) return iv;
  const Polynomial f = p.square_free();
  int sign_lo = f(iv.lo).sign();
  while (iv.hi - iv.lo > width) {
    Rational m = midpoint(iv.lo, iv.hi);
    int sm = f(m).sign();
    if (sm == 0) return {m, m};
    if (sm == sign_lo) iv.lo = std::move(m);
    else iv.hi = std::move(m);
  }
  return iv;
}

double root_to_double(const Polynomial& p, const RootInterval& iv) {
  if (iv.exact()) return iv.lo.to_double();
  Rational scale = max(iv.lo.abs(), iv.hi.abs());
  if (scale.is_zero()) scale = Rational(1);
  Rational width = scale * Rational(BigInt(1), BigInt(1) << 60);
  RootInterval r = refine_root(p, iv, width);
  return midpoint(r.lo, r.hi).to_double();
}

int root_multiplicity(const Polynomial& p, const Rational& r) {
  int k = 0;
  Polynomial d = p;
  while (!d.is_zero() && d(r).is_zero()) {
    ++k;
    d = d.derivative();
  }
  return k;
}

namespace {

// Enclosure of p on [a, a + w] from the Taylor expansion at a.
Enclosure taylor_enclosure(const Polynomial& p, const Rational& a, const Rational& w) {
  Polynomial q = p.taylor_shift(a);
  if (q.is_zero()) return {Rational(0), Rational(0)};
  Rational spread;
  Rational wk = w;
  for (std::size_t k = 1; k < q.coeffs().size(); ++k) {
    spread += q.coeffs()[k].abs() * wk;
    wk *= w;
  }
  return {q.coeffs()[0] - spread, q.coeffs()[0] + spread};
}

}  // namespace

Enclosure range_enclosure(const Polynomial& p, const Rational& a, const Rational& b) {
  if (b < a) throw DomainError("range enclosure on an empty interval");
  Rational va = p(a);
  Rational vb = p(b);
  Enclosure e{min(va, vb), max(va, vb)};
  Polynomial dp = p.derivative();
  if (dp.is_zero() || a == b) return e;
  const Rational width = (b - a) * Rational(BigInt(1), BigInt(1) << 64);
  for (auto iv : isolate_roots(dp, a, b)) {
    Enclosure local;
    if (iv.exact()) {
      Rational v = p(iv.lo);
      local = {v, v};
    } else {
      iv = refine_root(dp, iv, width);
      local = iv.exact() ? Enclosure{p(iv.lo), p(iv.lo)} : taylor_enclosure(p, iv.lo, iv.hi - iv.lo);
    }
    e.lo = min(e.lo, local.lo);
    e.hi = max(e.hi, local.hi);
  }
  return e;
}

}  // namespace wfarey
