#include "wfarey_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wfarey/errors.hpp"
#include "wfarey/farey.hpp"
#include "wfarey/limit_law.hpp"
#include "wfarey/section.hpp"
#include "wfarey/stats.hpp"
#include "wfarey/unit.hpp"

#ifndef WFAREY_VERSION
#define WFAREY_VERSION "dev"
#endif

namespace wfarey::cli {

namespace {

struct Config {
  std::string command;
  std::string unit_path;
  std::string Q;
  std::size_t bins = 0;
  std::size_t grid = 0;
  double tol = kDefaultQuadTol;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  bool overlay = false;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool csv(const Config& c) { return c.format == "csv"; }

void header(std::ostream& os, const Config& c, const Unit& u) {
  os << "# tool: wfarey " << WFAREY_VERSION << "\n"
     << "# command: " << c.command << "\n"
     << "# unit: " << c.unit_path << "\n"
     << "# unit_hash: " << u.hash_hex() << "\n"
     << "# Q: " << (c.Q.empty() ? "-" : c.Q) << "\n"
     << "# tol: " << fmt(c.tol) << "\n"
     << "# seed: " << c.seed << "\n"
     << "# bins: " << c.bins << "\n"
     << "# grid: " << c.grid << "\n"
     << "# format: " << c.format << "\n"
     << "# overlay: " << (c.overlay ? "true" : "false") << "\n";
}

// Summary values: comment lines in csv, plain key: value lines in a report.
void summary(std::ostream& os, const Config& c, const std::string& key, const std::string& value) {
  os << (csv(c) ? "# " : "") << key << ": " << value << "\n";
}

void table(std::ostream& os, const std::string& name, const std::string& columns) {
  os << "# table: " << name << "\n" << columns << "\n";
}

Rational order(const Config& c) {
  if (c.Q.empty()) throw ParseError("--Q is required for '" + c.command + "'");
  Rational Q = Rational::parse(c.Q);
  if (Q.sign() <= 0) throw ParseError("--Q must be positive");
  return Q;
}

double default_zmax(const LimitLaw& law) { return 1.5 * law.kink_values().back(); }

int cmd_gen(const Config& c, const Unit& u, std::ostream& os) {
  const Rational Q = order(c);
  const FareySequence f = generate_farey(u, Q);
  const UnitDerived d = derive(u, c.tol);
  const double Qd = Q.to_double();
  header(os, c, u);
  summary(os, c, "n", std::to_string(f.size()));
  summary(os, c, "method", to_string(f.method));
  summary(os, c, "C", fmt(d.C));
  summary(os, c, "asymptotic_ratio", fmt(static_cast<double>(f.size()) * kTwoZeta2 / (d.C * Qd * Qd)));
  if (!csv(c)) return kOk;
  table(os, "sequence", "i,p,q,s,u_denominator,u_denominator_exact");
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const Rational& s = f.points[i];
    const Rational den = u.u_denominator(s);
    os << i << ',' << s.num() << ',' << s.den() << ',' << fmt(s.to_double()) << ',' << fmt(den.to_double()) << ','
       << den << '\n';
  }
  return kOk;
}

int cmd_gaps(const Config& c, const Unit& u, std::ostream& os) {
  const Rational Q = order(c);
  const FareySequence f = generate_farey(u, Q);
  const GapSample g = normalized_gaps(f);
  const LimitLaw law(u, c.tol);
  const double zmax = default_zmax(law);
  const std::size_t bins = c.bins ? c.bins : 60;
  const std::size_t points = c.grid ? c.grid : 200;
  const Histogram h = histogram(g.gaps, 0.0, zmax, bins);
  const TabulatedCdf H = tabulate_weighted_cdf(law);
  const double ks = ks_distance(g.gaps, [&H](double z) { return H(z); });

  header(os, c, u);
  summary(os, c, "n", std::to_string(g.n));
  summary(os, c, "method", to_string(f.method));
  summary(os, c, "mean_gap", fmt(g.mean()));
  summary(os, c, "min_gap", fmt(*std::min_element(g.gaps.begin(), g.gaps.end())));
  summary(os, c, "z_max", fmt(zmax));
  summary(os, c, "above_z_max", std::to_string(h.above));
  summary(os, c, "ks", fmt(ks));
  if (!csv(c)) return kOk;
  table(os, "histogram", c.overlay ? "z_lo,z_hi,density,h_u" : "z_lo,z_hi,density");
  for (std::size_t k = 0; k < bins; ++k) {
    const double lo = h.lo + static_cast<double>(k) * h.width();
    os << fmt(lo) << ',' << fmt(lo + h.width()) << ',' << fmt(h.density[k]);
    if (c.overlay) os << ',' << fmt(law.pdf(h.center(k)));
    os << '\n';
  }
  table(os, "ecdf", c.overlay ? "z,ecdf,H_u" : "z,ecdf");
  for (const auto& [z, F] : ecdf_points(g.gaps, points)) {
    os << fmt(z) << ',' << fmt(F);
    if (c.overlay) os << ',' << fmt(H(z));
    os << '\n';
  }
  return kOk;
}

int cmd_dist(const Config& c, const Unit& u, std::ostream& os) {
  const LimitLaw law(u, c.tol);
  const std::size_t grid = c.grid ? c.grid : 200;
  const double zmax = default_zmax(law);
  header(os, c, u);
  summary(os, c, "C", fmt(law.derived().C));
  summary(os, c, "l", fmt(law.derived().l));
  summary(os, c, "L", fmt(law.derived().L));
  summary(os, c, "kinks", std::to_string(law.kinks().size()));
  if (!csv(c)) {
    for (const auto& k : law.kinks()) summary(os, c, "kink", fmt(k.z));
    return kOk;
  }
  table(os, "law", "z,H_u,h_u");
  for (std::size_t k = 1; k <= grid; ++k) {
    const double z = zmax * static_cast<double>(k) / static_cast<double>(grid);
    os << fmt(z) << ',' << fmt(law.cdf(z)) << ',' << fmt(law.pdf(z)) << '\n';
  }
  table(os, "kinks", "z,s,s_exact,factor,u_squared_exact");
  for (const auto& k : law.kinks()) {
    for (const auto& p : k.preimages) {
      os << fmt(k.z) << ',' << fmt(p.point.s) << ',' << (p.point.exact ? p.point.exact->to_string() : "") << ','
         << p.factor << ',' << (p.u_squared ? p.u_squared->to_string() : "") << '\n';
    }
  }
  return kOk;
}

std::string threshold_hint(const Unit& u) {
  const Rational bound = qprime_bound(u);
  const std::int64_t cap = 5000;
  const std::int64_t qmax = std::min<std::int64_t>(cap, std::max<std::int64_t>(1, bound.num().convert_to<std::int64_t>()));
  const auto measured = min_unimodular_Q(u, qmax);
  std::ostringstream os;
  os << "measured Q' = " << (measured ? std::to_string(*measured) : "not found") << " (scan up to " << qmax
     << "), rigorous bound " << bound;
  return os.str();
}

int cmd_pentagon(const Config& c, const Unit& u, std::ostream& os, std::ostream& err) {
  const Rational Q = order(c);
  const FareySequence f = generate_farey(u, Q);
  if (!all_unimodular(f)) {
    err << "wfarey: F_u(" << Q << ") has non-unimodular gaps, so the return pairs are undefined; "
        << threshold_hint(u) << ". Rerun with a larger --Q.\n";
    return kCheckFailed;
  }
  const LimitLaw law(u, c.tol);
  const Pentagon pent = Pentagon::of(law.derived());
  const ReturnProcess proc = return_pairs(f);
  const std::size_t bins = c.bins ? c.bins : 20;
  const std::size_t grid = c.grid ? c.grid : 40;
  const ConvergenceReport rep = convergence_report(proc, law, pent, bins);
  const ContainmentReport cont = containment_check(u, f, proc);
  const std::size_t gap_fail = gap_identity_failures(f, proc);

  header(os, c, u);
  summary(os, c, "pairs", std::to_string(rep.pairs));
  summary(os, c, "l", fmt(pent.l));
  summary(os, c, "L", fmt(pent.L));
  summary(os, c, "ks_z", fmt(rep.ks_z));
  summary(os, c, "discrepancy_max", fmt(rep.discrepancy_max));
  summary(os, c, "discrepancy_l1", fmt(rep.discrepancy_l1));
  summary(os, c, "containment_fraction", fmt(rep.containment_fraction));
  summary(os, c, "exact_containment", cont.ok() ? "ok" : "FAILED");
  summary(os, c, "gap_identity_failures", std::to_string(gap_fail));
  if (csv(c)) {
    const double C = law.derived().C;
    table(os, "pairs", "i,s,c_exact,d_exact,c,d,z");
    for (std::size_t i = 0; i < proc.pairs.size(); ++i) {
      const auto& p = proc.pairs[i];
      os << i << ',' << f.points[i] << ',' << p.c_exact(Q) << ',' << p.d_exact(Q) << ',' << fmt(p.c) << ','
         << fmt(p.d) << ',' << fmt(z_value(C, p.c, p.d)) << '\n';
    }
    table(os, "density", "x,y,p");
    for (std::size_t ix = 0; ix < grid; ++ix) {
      for (std::size_t iy = 0; iy < grid; ++iy) {
        const double x = pent.L * (static_cast<double>(ix) + 0.5) / static_cast<double>(grid);
        const double y = pent.L * (static_cast<double>(iy) + 0.5) / static_cast<double>(grid);
        os << fmt(x) << ',' << fmt(y) << ',' << fmt(pentagon_density(pent, law, x, y)) << '\n';
      }
    }
  }
  return cont.ok() && gap_fail == 0 && rep.containment_fraction == 1.0 ? kOk : kCheckFailed;
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Check> run_checks(const Unit& u, std::int64_t qmax, double tol) {
  std::vector<Check> checks;
  const Rational u0 = u.eval(Rational(0));
  const std::int64_t qmin = u0.ceil().convert_to<std::int64_t>();

  {
    std::vector<std::int64_t> orders;
    for (std::int64_t q = qmin; q <= std::min<std::int64_t>(qmax, 50); ++q) orders.push_back(q);
    for (std::int64_t q : {qmax / 8, qmax / 4, qmax / 2, qmax})
      if (q > 50 && q >= qmin) orders.push_back(q);
    std::size_t bad = 0, via_recurrence = 0;
    std::string first;
    for (std::int64_t q : orders) {
      const auto g = generate_farey(u, Rational(q));
      via_recurrence += g.method == FareyMethod::recurrence;
      if (g.points != brute_force_farey(u, Rational(q)).points) {
        if (!bad++) first = " first at Q=" + std::to_string(q);
      }
    }
    checks.push_back({"oracle_equivalence", bad == 0,
                      std::to_string(orders.size()) + " orders, " + std::to_string(via_recurrence) +
                          " via recurrence" + first});
  }

  const Rational bound = qprime_bound(u);
  const auto measured = min_unimodular_Q(u, qmax);
  {
    std::ostringstream os;
    os << "Q'=" << (measured ? std::to_string(*measured) : "none") << " bound=" << bound << " Q_max=" << qmax;
    // Orders are scanned from 1, so a bound of 0 means every scanned order.
    const bool pass = measured && (Rational(*measured) <= max(bound, Rational(1)));
    checks.push_back({"unimodularity", pass, os.str()});
  }

  const FareySequence f = generate_farey(u, Rational(qmax));
  {
    const FordReport r = ford_tangency_check(f);
    checks.push_back({"ford_tangency", r.ok(),
                      std::to_string(r.pairs) + " pairs, " + std::to_string(r.tangent) + " tangent, " +
                          std::to_string(r.violations.size()) + " violations"});
  }
  if (all_unimodular(f)) {
    const HitReport hits = verify_hits(u, f);
    checks.push_back({"hits", hits.ok(),
                      std::to_string(hits.hits) + " hits, " + std::to_string(hits.mismatches.size()) + " mismatches" +
                          (hits.ok() ? "" : " (first: " + hits.mismatches.front().reason + ")")});
    const ReturnProcess proc = return_pairs(f);
    const std::size_t gf = gap_identity_failures(f, proc);
    checks.push_back({"gap_identity", gf == 0, std::to_string(gf) + " failures"});
    const ContainmentReport cr = containment_check(u, f, proc);
    checks.push_back({"containment", cr.ok(),
                      std::to_string(cr.d_above_v + cr.c_above_v + cr.sum_below_mediant) + " violations"});
  } else {
    checks.push_back({"hits", false, "F_u(Q_max) is not unimodular"});
  }

  {
    const GapSample g = normalized_gaps(f);
    checks.push_back({"gap_mean", std::abs(g.mean() - 1.0) < 1e-12, "mean=" + fmt(g.mean())});
  }

  const LimitLaw law(u, tol);
  const UnitDerived& d = law.derived();
  {
    const double mass = integrate([&](double s) { return d.m(u, s); }, 0.0, 1.0, d.knots(), tol);
    checks.push_back({"m_normalized", std::abs(mass - 1.0) < 1e-8, "int m=" + fmt(mass)});
    const double half =
        integrate([&](double s) { return 0.5 / (u.eval_clamped(s) * u.eval_clamped(s)); }, 0.0, 1.0, d.knots(), tol);
    checks.push_back({"area_identity", std::abs(half - d.C / 2) < 1e-8, "area=" + fmt(half) + " C/2=" + fmt(d.C / 2)});
    const auto kinks = law.kink_values();
    const double total = integrate_half_line([&](double z) { return law.pdf(z); }, kinks, 1e-9);
    checks.push_back({"h_u_normalized", std::abs(total - 1.0) < 1e-6, "int h_u=" + fmt(total)});
    const double mean = integrate_half_line([&](double z) { return z * law.pdf(z); }, kinks, 1e-9);
    checks.push_back({"h_u_mean", std::abs(mean - 1.0) < 1e-6, "int z h_u=" + fmt(mean)});
  }
  return checks;
}

int cmd_verify(const Config& c, const Unit& u, std::ostream& os) {
  const std::int64_t qmax = c.Q.empty() ? 200 : order(c).floor().convert_to<std::int64_t>();
  if (qmax < 1) throw ParseError("--Q must be at least 1 for verify");
  const auto checks = run_checks(u, qmax, c.tol);
  header(os, c, u);
  bool all = true;
  if (csv(c)) table(os, "checks", "check,status,detail");
  for (const auto& ch : checks) {
    all = all && ch.pass;
    if (csv(c)) os << ch.name << ',' << (ch.pass ? "PASS" : "FAIL") << ",\"" << ch.detail << "\"\n";
    else os << ch.name << ": " << (ch.pass ? "PASS" : "FAIL") << " (" << ch.detail << ")\n";
  }
  summary(os, c, "result", all ? "PASS" : "FAIL");
  return all ? kOk : kCheckFailed;
}

int cmd_qprime(const Config& c, const Unit& u, std::ostream& os) {
  const Rational bound = qprime_bound(u);
  std::int64_t qmax;
  if (!c.Q.empty()) {
    qmax = order(c).floor().convert_to<std::int64_t>();
  } else {
    qmax = std::clamp<std::int64_t>(bound.num().convert_to<std::int64_t>(), 1, 2000);
  }
  const auto measured = min_unimodular_Q(u, qmax);
  header(os, c, u);
  summary(os, c, "qprime_bound", bound.to_string());
  summary(os, c, "min_u_lower", u.min_lower().to_string());
  summary(os, c, "scan_Q_max", std::to_string(qmax));
  summary(os, c, "measured_qprime", measured ? std::to_string(*measured) : "not found");
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Weighted Farey sequences, gap statistics and their limit laws", "wfarey"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(WFAREY_VERSION));

  const std::vector<std::pair<std::string, std::string>> commands{
      {"gen", "Generate F_u(Q)"},
      {"gaps", "Normalized-gap histogram and ECDF"},
      {"dist", "Limit law H_u, h_u and the kink catalog"},
      {"pentagon", "Return pairs, density raster and convergence report"},
      {"verify", "Run the verification suite up to order Q"},
      {"qprime", "Unimodularity threshold: rigorous bound and measured value"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--unit", cfg.unit_path, "Unit file (JSON)")->required();
    sub->add_option("--Q", cfg.Q, "Order, as an integer, p/q or decimal");
    sub->add_option("--bins", cfg.bins, "Histogram bins")->check(CLI::PositiveNumber);
    sub->add_option("--grid", cfg.grid, "Grid points")->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "Quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--out", cfg.out, "Output file (default: stdout)");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "report"}));
    sub->add_flag("--overlay", cfg.overlay, "Add the limit law next to empirical columns");
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  std::unique_ptr<std::ofstream> file;
  if (!cfg.out.empty()) {
    file = std::make_unique<std::ofstream>(cfg.out);
    if (!*file) {
      err << "wfarey: cannot write '" << cfg.out << "'\n";
      return kUsage;
    }
  }
  std::ostream& os = file ? static_cast<std::ostream&>(*file) : out;

  std::optional<Unit> unit;
  try {
    unit.emplace(load_unit(cfg.unit_path));
  } catch (const Error& e) {
    err << "wfarey: invalid unit: " << e.what() << "\n";
    return kUsage;
  }

  try {
    const Unit& u = *unit;
    if (cfg.command == "gen") return cmd_gen(cfg, u, os);
    if (cfg.command == "gaps") return cmd_gaps(cfg, u, os);
    if (cfg.command == "dist") return cmd_dist(cfg, u, os);
    if (cfg.command == "pentagon") return cmd_pentagon(cfg, u, os, err);
    if (cfg.command == "verify") return cmd_verify(cfg, u, os);
    if (cfg.command == "qprime") return cmd_qprime(cfg, u, os);
  } catch (const ParseError& e) {
    err << "wfarey: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "wfarey: " << e.what() << "\n";
    return kUsage;
  } catch (const EnumerationCapError& e) {
    err << "wfarey: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "wfarey: " << e.what() << "\n";
    return kCheckFailed;
  }
  err << "wfarey: unknown command\n";
  return kUsage;
}

}  // namespace wfarey::cli
