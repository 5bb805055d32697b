#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wfarey/rational.hpp"
#include "wfarey/unit.hpp"

namespace wfarey {

/// Default guard on the largest denominator brute force will visit.
inline constexpr std::int64_t kDefaultEnumerationCap = 10'000'000;

enum class FareyMethod { brute_force, recurrence };

std::string to_string(FareyMethod m);

/// F_u(Q): every reduced p/q in [0, 1) with u(p/q) * q <= Q, sorted.
struct FareySequence {
  std::string unit_hash;
  Rational order_Q;
  std::vector<Rational> points;
  FareyMethod method = FareyMethod::brute_force;

  std::size_t size() const noexcept { return points.size(); }
};

struct BruteForceOptions {
  std::int64_t cap = kDefaultEnumerationCap;
  unsigned workers = 1;
};

/// Largest denominator a member of F_u(Q) can have, floor(Q / min u).
std::int64_t denominator_bound(const Unit& u, const Rational& Q);

/// Reference enumeration. Throws DomainError when 0/1 is not a member and
/// EnumerationCapError when the denominator bound exceeds the cap. The
/// result does not depend on the worker count.
FareySequence brute_force_farey(const Unit& u, const Rational& Q, const BruteForceOptions& opts = {});

/// 1 + sum_{q=2..Q} phi(q), by a totient sieve.
std::uint64_t totient_count_oracle(std::int64_t Q);

/// |F_u(Q)| for every integer Q = 0..Q_max, from a single enumeration.
std::vector<std::uint64_t> cumulative_counts(const Unit& u, std::int64_t Q_max,
                                             const BruteForceOptions& opts = {});

/// Successor of curr in F_u(Q) when (prev, curr) are consecutive and every
/// gap is unimodular. Returns 1/1 when curr is the last point. Throws
/// RecurrenceBreakdown when no unimodular successor is a member.
Rational next_term(const Unit& u, const Rational& Q, const Rational& prev, const Rational& curr);

/// Recurrence when Q >= qprime_bound(u), brute force otherwise or on
/// breakdown. Same points either way; `method` records the route taken.
FareySequence generate_farey(const Unit& u, const Rational& Q, const BruteForceOptions& opts = {});

/// ceil(sup|(u^2)'| / min u), from rigorous enclosures. Every gap of
/// F_u(Q) is unimodular once Q reaches this value.
Rational qprime_bound(const Unit& u);

/// Smallest integer Q <= Q_max such that F_u(Q'') has only unimodular gaps
/// (with 1 appended) for every integer Q'' in [Q, Q_max]. An empty
/// sequence counts as unimodular. nullopt if Q_max itself fails.
std::optional<std::int64_t> min_unimodular_Q(const Unit& u, std::int64_t Q_max,
                                             const BruteForceOptions& opts = {});

/// True iff every consecutive pair of f.points with 1/1 appended is unimodular.
bool all_unimodular(const FareySequence& f);

struct GapSample {
  std::vector<double> gaps;  // n(Q) * (s_{i+1} - s_i), with s_n = 1
  std::size_t n = 0;

  double mean() const;
};

GapSample normalized_gaps(const FareySequence& f);

struct FordViolation {
  std::size_t index = 0;
  std::string reason;
};

struct FordReport {
  std::size_t pairs = 0;
  std::size_t tangent = 0;
  std::size_t external = 0;
  std::vector<FordViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Ford circles of consecutive points (1/1 appended) must be tangent for
/// unimodular pairs and strictly external otherwise; checked exactly.
FordReport ford_tangency_check(const FareySequence& f);

/// Fraction of points falling in each of `bins` equal bins of [0, 1).
std::vector<double> empirical_bin_masses(const FareySequence& f, std::size_t bins);

/// u(p/q) * q for every point.
std::vector<Rational> u_denominators(const Unit& u, const FareySequence& f);

}  // namespace wfarey
