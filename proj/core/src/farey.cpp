#include "wfarey/farey.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <thread>
#include <utility>

#include "wfarey/errors.hpp"
#include "wfarey/quadrature.hpp"

namespace wfarey {

namespace {

__extension__ typedef __int128 i128;

struct Frac {
  std::int64_t p;
  std::int64_t q;
};

bool less(const Frac& a, const Frac& b) {
  return static_cast<i128>(a.p) * b.q < static_cast<i128>(b.p) * a.q;
}

bool unimodular(const Frac& a, const Frac& b) {
  return static_cast<i128>(b.p) * a.q - static_cast<i128>(a.p) * b.q == 1;
}

std::int64_t checked_bound(const Unit& u, const Rational& Q, std::int64_t cap) {
  const BigInt D = (Q / u.min_lower()).floor();
  if (D > BigInt(cap)) {
    throw EnumerationCapError("brute force would visit denominators up to " + D.str() +
                              ", above the cap of " + std::to_string(cap));
  }
  return D.convert_to<std::int64_t>();
}

void enumerate_slice(const DenominatorTest& test, const Rational& Q, const Rational& max_u, std::int64_t D,
                     std::int64_t first, std::int64_t stride, std::vector<Frac>& out) {
  for (std::int64_t q = first; q <= D; q += stride) {
    // Below Q / max u every coprime numerator qualifies.
    const bool all = Rational(q) * max_u <= Q;
    if (q == 1) {
      if (test(std::int64_t{0}, std::int64_t{1})) out.push_back({0, 1});
      continue;
    }
    for (std::int64_t p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      if (all || test(p, q)) out.push_back({p, q});
    }
  }
}

// Sorted members of F_u(Q); no requirement that 0/1 be one of them.
std::vector<Frac> enumerate(const Unit& u, const Rational& Q, const BruteForceOptions& opts) {
  if (Q.sign() <= 0) return {};
  const std::int64_t D = checked_bound(u, Q, opts.cap);
  const DenominatorTest test(u, Q);
  const unsigned workers = std::max(1u, opts.workers);
  std::vector<std::vector<Frac>> parts(workers);
  if (workers == 1) {
    enumerate_slice(test, Q, u.max_upper(), D, 1, 1, parts[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { enumerate_slice(test, Q, u.max_upper(), D, 1 + w, workers, parts[w]); });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<Frac> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  std::sort(all.begin(), all.end(), less);
  return all;
}

FareySequence to_sequence(const Unit& u, const Rational& Q, const std::vector<Frac>& fr, FareyMethod method) {
  FareySequence f;
  f.unit_hash = u.hash_hex();
  f.order_Q = Q;
  f.method = method;
  f.points.reserve(fr.size());
  for (const auto& x : fr) f.points.push_back(Rational::from_reduced(BigInt(x.p), BigInt(x.q)));
  return f;
}

void require_origin(const DenominatorTest& test, const Rational& Q) {
  if (!test(std::int64_t{0}, std::int64_t{1})) {
    throw DomainError("order Q = " + Q.to_string() + " is below u(0), so F_u(Q) is empty");
  }
}

class Stepper {
 public:
  Stepper(const DenominatorTest& test, std::int64_t D) : test_(test), D_(D) {}

  // Successor of c given its predecessor b; {1, 1} marks the end.
  Frac next(const Frac& b, const Frac& c) const {
    for (std::int64_t k = (D_ + b.q) / c.q; k >= 1; --k) {
      const std::int64_t q = k * c.q - b.q;
      const std::int64_t p = k * c.p - b.p;
      if (q <= 0) break;
      if (p >= q) {
        if (p == q) return {1, 1};
        break;
      }
      if (test_(p, q)) return {p, q};
    }
    throw RecurrenceBreakdown("no unimodular successor of " + std::to_string(c.p) + "/" + std::to_string(c.q) +
                              " is a member at this order");
  }

 private:
  const DenominatorTest& test_;
  std::int64_t D_;
};

// Smallest positive member, or 1/1 if there is none.
Frac first_positive(const DenominatorTest& test, std::int64_t D) {
  Frac best{1, 1};
  for (std::int64_t q = 2; q <= D; ++q) {
    for (std::int64_t p = 1; less({p, q}, best); ++p) {
      if (std::gcd(p, q) != 1) continue;
      if (test(p, q)) {
        best = {p, q};
        break;
      }
    }
  }
  return best;
}

Frac to_frac(const Rational& r) {
  return {r.num().convert_to<std::int64_t>(), r.den().convert_to<std::int64_t>()};
}

}  // namespace

std::string to_string(FareyMethod m) { return m == FareyMethod::recurrence ? "recurrence" : "brute_force"; }

std::int64_t denominator_bound(const Unit& u, const Rational& Q) {
  return checked_bound(u, Q, std::numeric_limits<std::int64_t>::max() / 4);
}

FareySequence brute_force_farey(const Unit& u, const Rational& Q, const BruteForceOptions& opts) {
  if (Q.sign() <= 0) throw DomainError("order Q must be positive");
  require_origin(DenominatorTest(u, Q), Q);
  return to_sequence(u, Q, enumerate(u, Q, opts), FareyMethod::brute_force);
}

std::uint64_t totient_count_oracle(std::int64_t Q) {
  if (Q < 1) throw DomainError("totient oracle needs Q >= 1");
  std::vector<std::int64_t> phi(static_cast<std::size_t>(Q) + 1);
  std::iota(phi.begin(), phi.end(), 0);
  for (std::int64_t i = 2; i <= Q; ++i) {
    if (phi[i] != i) continue;
    for (std::int64_t j = i; j <= Q; j += i) phi[j] -= phi[j] / i;
  }
  std::uint64_t total = 1;
  for (std::int64_t q = 2; q <= Q; ++q) total += static_cast<std::uint64_t>(phi[q]);
  return total;
}

namespace {

// Smallest integer order at which each point joins the sequence.
std::vector<std::int64_t> entry_orders(const Unit& u, const std::vector<Frac>& pts) {
  std::vector<std::int64_t> out;
  out.reserve(pts.size());
  for (const auto& x : pts) {
    const Rational s = Rational::from_reduced(BigInt(x.p), BigInt(x.q));
    out.push_back(std::max<std::int64_t>(1, (u.eval(s) * Rational(x.q)).ceil().convert_to<std::int64_t>()));
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> cumulative_counts(const Unit& u, std::int64_t Q_max, const BruteForceOptions& opts) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(std::max<std::int64_t>(Q_max, 0)) + 1, 0);
  if (Q_max < 1) return counts;
  const auto pts = enumerate(u, Rational(Q_max), opts);
  for (std::int64_t k : entry_orders(u, pts)) ++counts[static_cast<std::size_t>(k)];
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  return counts;
}

Rational next_term(const Unit& u, const Rational& Q, const Rational& prev, const Rational& curr) {
  if (!(prev < curr) || !(curr < Rational(1))) throw DomainError("next_term needs prev < curr < 1");
  if (!is_unimodular(prev, curr)) throw NotUnimodularError("next_term needs a unimodular (prev, curr) pair");
  const DenominatorTest test(u, Q);
  const Stepper step(test, denominator_bound(u, Q));
  const Frac n = step.next(to_frac(prev), to_frac(curr));
  return Rational::from_reduced(BigInt(n.p), BigInt(n.q));
}

FareySequence generate_farey(const Unit& u, const Rational& Q, const BruteForceOptions& opts) {
  if (Q.sign() <= 0) throw DomainError("order Q must be positive");
  const DenominatorTest test(u, Q);
  require_origin(test, Q);
  if (Q >= qprime_bound(u)) {
    try {
      const std::int64_t D = denominator_bound(u, Q);
      const Stepper step(test, D);
      std::vector<Frac> pts{{0, 1}};
      Frac prev{0, 1};
      Frac curr = first_positive(test, D);
      if (!unimodular(prev, curr)) throw RecurrenceBreakdown("first gap is not unimodular");
      while (curr.q != 1) {
        pts.push_back(curr);
        const Frac nxt = step.next(prev, curr);
        prev = curr;
        curr = nxt;
      }
      return to_sequence(u, Q, pts, FareyMethod::recurrence);
    } catch (const RecurrenceBreakdown&) {
      // fall through to the reference enumeration
    }
  }
  return to_sequence(u, Q, enumerate(u, Q, opts), FareyMethod::brute_force);
}

Rational qprime_bound(const Unit& u) {
  Rational S(0);
  for (const auto& piece : u.pieces()) {
    const Polynomial d = (piece.poly * piece.poly).derivative();
    if (d.is_zero()) continue;
    const Enclosure e = range_enclosure(d, piece.from, piece.to);
    S = max(S, max(e.lo.abs(), e.hi.abs()));
  }
  return Rational((S / u.min_lower()).ceil());
}

std::optional<std::int64_t> min_unimodular_Q(const Unit& u, std::int64_t Q_max, const BruteForceOptions& opts) {
  if (Q_max < 1) return std::nullopt;
  const auto pts = enumerate(u, Rational(Q_max), opts);
  const auto orders = entry_orders(u, pts);
  std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(Q_max) + 1);
  for (std::size_t i = 0; i < pts.size(); ++i) buckets[static_cast<std::size_t>(orders[i])].push_back(i);

  auto cmp = [](const Frac& a, const Frac& b) { return less(a, b); };
  std::set<Frac, decltype(cmp)> current(cmp);
  current.insert({1, 1});
  std::size_t bad = 0;
  std::vector<bool> good(static_cast<std::size_t>(Q_max) + 1, true);
  for (std::int64_t Q = 1; Q <= Q_max; ++Q) {
    for (std::size_t i : buckets[static_cast<std::size_t>(Q)]) {
      auto it = current.insert(pts[i]).first;
      auto after = std::next(it);
      if (it != current.begin()) {
        auto before = std::prev(it);
        bad -= !unimodular(*before, *after);
        bad += !unimodular(*before, *it);
      }
      bad += !unimodular(*it, *after);
    }
    good[static_cast<std::size_t>(Q)] = bad == 0;
  }
  if (!good[static_cast<std::size_t>(Q_max)]) return std::nullopt;
  std::int64_t Q = Q_max;
  while (Q > 1 && good[static_cast<std::size_t>(Q - 1)]) --Q;
  return Q;
}

bool all_unimodular(const FareySequence& f) {
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const Rational& next = i + 1 < f.points.size() ? f.points[i + 1] : Rational(1);
    if (!is_unimodular(f.points[i], next)) return false;
  }
  return true;
}

double GapSample::mean() const {
  CompensatedSum s;
  for (double g : gaps) s.add(g);
  return gaps.empty() ? 0.0 : s.value() / static_cast<double>(gaps.size());
}

GapSample normalized_gaps(const FareySequence& f) {
  if (f.points.empty()) throw DomainError("gap statistics need a nonempty sequence");
  GapSample g;
  g.n = f.points.size();
  g.gaps.reserve(g.n);
  const BigInt n(static_cast<std::uint64_t>(g.n));
  constexpr double kExact = 9007199254740992.0;  // 2^53
  for (std::size_t i = 0; i < g.n; ++i) {
    const Rational& a = f.points[i];
    const Rational next = i + 1 < g.n ? f.points[i + 1] : Rational(1);
    // n * (b - a) = n * (pb qa - pa qb) / (qa qb), rounded once
    const BigInt num = n * (next.num() * a.den() - a.num() * next.den());
    const BigInt den = a.den() * next.den();
    if (num < BigInt(kExact) && den < BigInt(kExact)) {
      g.gaps.push_back(num.convert_to<double>() / den.convert_to<double>());
    } else {
      g.gaps.push_back(ratio_to_double(num, den));
    }
  }
  return g;
}

FordReport ford_tangency_check(const FareySequence& f) {
  FordReport rep;
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const Rational& a = f.points[i];
    const Rational b = i + 1 < f.points.size() ? f.points[i + 1] : Rational(1);
    const Rational ra(BigInt(1), 2 * a.den() * a.den());
    const Rational rb(BigInt(1), 2 * b.den() * b.den());
    const Rational dx = b - a;
    const Rational dy = rb - ra;
    const Rational dist2 = dx * dx + dy * dy;
    const Rational sum = ra + rb;
    const Rational touch = sum * sum;
    ++rep.pairs;
    const bool unimod = is_unimodular(a, b);
    if (dist2 == touch) {
      ++rep.tangent;
      if (!unimod) rep.violations.push_back({i, "tangent circles on a non-unimodular pair"});
    } else if (touch < dist2) {
      ++rep.external;
      if (unimod) rep.violations.push_back({i, "unimodular pair with disjoint circles"});
    } else {
      rep.violations.push_back({i, "overlapping Ford circles"});
    }
  }
  return rep;
}

std::vector<double> empirical_bin_masses(const FareySequence& f, std::size_t bins) {
  if (bins == 0) throw DomainError("need at least one bin");
  std::vector<double> mass(bins, 0.0);
  if (f.points.empty()) return mass;
  const BigInt B(static_cast<std::uint64_t>(bins));
  for (const auto& s : f.points) {
    const auto k = static_cast<std::size_t>(BigInt(s.num() * B / s.den()).convert_to<std::uint64_t>());
    mass[std::min(k, bins - 1)] += 1.0;
  }
  for (double& m : mass) m /= static_cast<double>(f.points.size());
  return mass;
}

std::vector<Rational> u_denominators(const Unit& u, const FareySequence& f) {
  std::vector<Rational> out;
  out.reserve(f.points.size());
  for (const auto& s : f.points) out.push_back(u.u_denominator(s));
  return out;
}

}  // namespace wfarey
