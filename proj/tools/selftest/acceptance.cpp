#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>

#include "flatconn/area.hpp"
#include "flatconn/assignment.hpp"
#include "flatconn/dual.hpp"
#include "flatconn/flatnorm.hpp"
#include "flatconn/jacobian.hpp"
#include "flatconn/parallel.hpp"
#include "flatconn/random.hpp"

namespace flatconn::selftest {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng instance_rng(std::uint64_t seed, int criterion, std::size_t index) {
  return Rng(mix(mix(seed) ^ mix(static_cast<std::uint64_t>(criterion) << 32 | index)));
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

DomainPtr unit_disc() {
  static const DomainPtr d = std::make_shared<const Domain>(Domain::disc({0.0, 0.0}, 1.0, 720));
  return d;
}

DomainPtr l_shape() {
  static const DomainPtr d = std::make_shared<const Domain>(Domain::l_shape(1.0));
  return d;
}

// ---- criterion 1 -----------------------------------------------------------

Criterion vortex_law(json& art) {
  Stopwatch sw;
  Criterion c{1, "vortex flat-norm law", true, "", 0.0, 1.0};
  double worst = 0.0;
  json rows = json::array();
  for (const double r : {0.05, 0.1, 0.25, 0.5, 1.0}) {
    const auto d = std::make_shared<const Domain>(Domain::disc({0.0, 0.0}, r, 720));
    const auto t = from_signed_atoms({{{0.0, 0.0}, 1}}, d).with_measure_scale(kPi);
    const double got = t.measure_scale() * solve_matching(t, NormKind{2.0}).value;
    const double want = kPi * std::min(1.0, 2.0 * r);
    worst = std::max(worst, std::abs(got - want));
    rows.push_back({{"r", r}, {"value", got}, {"expected", want}});
  }
  c.seconds = sw.seconds();
  c.passed = worst <= 2e-3;
  c.detail = "max |pi*value - pi*min(1,2r)| = " + fmt("%.3g", worst) + " (tol 2e-3)";
  art = {{"rows", rows}, {"max_error", worst}, {"passed", c.passed}};
  return c;
}

// ---- criteria 2, 3, 5 -------------------------------------------------------

struct OracleCase {
  double beta = 2.0;
  double matching = 0.0;
  double bruteforce = 0.0;
  double trivial = 0.0;
  std::size_t atoms = 0;
  bool disc = true;
};

OracleCase oracle_case(std::uint64_t seed, std::size_t i) {
  Rng rng = instance_rng(seed, 2, i);
  OracleCase oc;
  oc.disc = i % 2 == 0;
  oc.beta = (i / 2) % 2 == 0 ? 1.0 : 2.0;
  const DomainPtr d = oc.disc ? unit_disc() : l_shape();
  oc.atoms = static_cast<std::size_t>(rng.integer(1, 7));
  SignedAtomList atoms;
  for (std::size_t k = 0; k < oc.atoms; ++k) {
    atoms.push_back({sample_in_domain(*d, rng), rng.integer(0, 1) == 0 ? 1 : -1});
  }
  const auto t = from_signed_atoms(atoms, d);
  oc.matching = solve_matching(t, NormKind{oc.beta}).value;
  oc.bruteforce = solve_bruteforce(t, NormKind{oc.beta}).value;
  oc.trivial = trivial_upper_bound(t, 2.0);
  return oc;
}

struct DualCase {
  std::size_t pairs = 0;
  double value = 0.0;
  double trivial = 0.0;
  double gap = 0.0;
  double lipschitz_excess = 0.0;
  double boundary_max = 0.0;
  double activity = 0.0;
  int iterations = 0;
  bool dual_ok = false;
  StructureReport structure;
};

DualCase dual_case(std::uint64_t seed, std::size_t i) {
  Rng rng = instance_rng(seed, 3, i);
  const DomainPtr d = unit_disc();
  DualCase dc;
  dc.pairs = static_cast<std::size_t>(rng.integer(1, 12));
  std::vector<PolePair> pairs;
  for (std::size_t k = 0; k < dc.pairs; ++k) pairs.push_back({sample_in_domain(*d, rng), sample_in_domain(*d, rng)});
  const AtomicDistribution t(d, pairs);
  const Decomposition dec = solve_matching(t, NormKind{2.0});
  const DualCertificate cert = build_certificate(t, dec);
  const DualityReport rep = verify_duality(cert, t, dec, rng.bits(), 10000);
  dc.value = dec.value;
  dc.trivial = trivial_upper_bound(t, 2.0);
  dc.gap = rep.gap;
  dc.lipschitz_excess = rep.lipschitz_excess;
  dc.boundary_max = rep.boundary_max;
  dc.activity = rep.activity_residual;
  dc.iterations = cert.iterations_used;
  dc.dual_ok = rep.passed() && !cert.failed;
  dc.structure = verify_structure(dec, t, *d);
  return dc;
}

Criterion oracle_equivalence(std::uint64_t seed, std::vector<OracleCase>& cases, json& art) {
  Stopwatch sw;
  Criterion c{2, "matching equals brute force", true, "", 0.0, 30.0};
  cases.resize(500);
  parallel_for(cases.size(), [&](std::size_t i) { cases[i] = oracle_case(seed, i); });
  double worst = 0.0;
  std::size_t agree = 0;
  json values = json::array();
  for (const auto& oc : cases) {
    const double diff = std::abs(oc.matching - oc.bruteforce);
    worst = std::max(worst, diff);
    agree += diff <= 1e-9;
    values.push_back({oc.matching, oc.bruteforce});
  }
  c.seconds = sw.seconds();
  c.passed = agree == cases.size();
  c.detail = std::to_string(agree) + "/" + std::to_string(cases.size()) + " agree, max diff " + fmt("%.3g", worst) +
             " (tol 1e-9)";
  art = {{"instances", cases.size()}, {"agree", agree}, {"max_diff", worst}, {"values", values}, {"passed", c.passed}};
  return c;
}

Criterion strong_duality(std::uint64_t seed, std::vector<DualCase>& cases, json& art) {
  Stopwatch sw;
  Criterion c{3, "strong duality", true, "", 0.0, 60.0};
  cases.resize(200);
  parallel_for(cases.size(), [&](std::size_t i) { cases[i] = dual_case(seed, i); });
  double gap = 0.0, lip = -1.0, bnd = 0.0, act = 0.0;
  std::size_t ok = 0;
  std::map<int, int> iterations;
  json rows = json::array();
  for (const auto& dc : cases) {
    gap = std::max(gap, dc.gap);
    lip = std::max(lip, dc.lipschitz_excess);
    bnd = std::max(bnd, dc.boundary_max);
    act = std::max(act, dc.activity);
    ok += dc.dual_ok;
    ++iterations[dc.iterations];
    rows.push_back({{"pairs", dc.pairs}, {"value", dc.value}, {"gap", dc.gap}, {"iterations", dc.iterations}});
  }
  json hist = json::object();
  for (const auto& [k, n] : iterations) hist[std::to_string(k)] = n;
  c.seconds = sw.seconds();
  c.passed = ok == cases.size();
  c.detail = std::to_string(ok) + "/" + std::to_string(cases.size()) + " certified, max gap " + fmt("%.3g", gap) +
             ", max boundary |phi| " + fmt("%.3g", bnd) + ", max Lipschitz excess " + fmt("%.3g", lip);
  art = {{"instances", cases.size()},
         {"certified", ok},
         {"max_gap", gap},
         {"max_lipschitz_excess", lip},
         {"max_boundary_abs", bnd},
         {"max_activity_residual", act},
         {"iterations_histogram", hist},
         {"rows", rows},
         {"passed", c.passed}};
  return c;
}

Criterion minimizer_structure(const std::vector<DualCase>& cases, json& art) {
  Stopwatch sw;
  Criterion c{4, "structure of minimizers", true, "", 0.0, 0.0};
  std::size_t hard = 0, skipped = 0;
  json failures = json::array();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& r = cases[i].structure;
    auto soft_ok = [](CheckStatus s) { return s == CheckStatus::pass || s == CheckStatus::skipped_degenerate; };
    const bool ok = r.a == CheckStatus::pass && r.b == CheckStatus::pass && r.h == CheckStatus::pass &&
                    soft_ok(r.e) && soft_ok(r.f) && soft_ok(r.g);
    if (!ok) {
      ++hard;
      failures.push_back({{"instance", i}, {"notes", r.notes}});
    }
    skipped += r.degenerate;
  }
  c.seconds = sw.seconds();
  c.passed = hard == 0;
  c.detail = std::to_string(hard) + " hard failures, " + std::to_string(skipped) + " skipped-degenerate of " +
             std::to_string(cases.size());
  art = {{"instances", cases.size()}, {"hard_failures", hard}, {"skipped_degenerate", skipped},
         {"failures", failures}, {"passed", c.passed}};
  return c;
}

Criterion trivial_bound(const std::vector<OracleCase>& oracle, const std::vector<DualCase>& dual, json& art) {
  Stopwatch sw;
  Criterion c{5, "trivial upper bound", true, "", 0.0, 0.0};
  std::size_t violations = 0;
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& oc : oracle) {
    for (const double v : {oc.matching, oc.bruteforce}) {
      violations += v > oc.trivial + 1e-12;
      slack = std::min(slack, oc.trivial - v);
    }
  }
  for (const auto& dc : dual) {
    violations += dc.value > dc.trivial + 1e-12;
    slack = std::min(slack, dc.trivial - dc.value);
  }
  c.seconds = sw.seconds();
  c.passed = violations == 0;
  c.detail = std::to_string(violations) + " violations over " + std::to_string(oracle.size() + dual.size()) +
             " instances, min slack " + fmt("%.3g", slack);
  art = {{"violations", violations}, {"min_slack", slack}, {"passed", c.passed}};
  return c;
}

// ---- criterion 6 -----------------------------------------------------------

struct WindingCase {
  bool atoms_ok = false;
  bool circles_ok = false;
  int max_cell_offset = 0;
  int vortices = 0;
  int circles_checked = 0;
  std::size_t unreliable = 0;
  std::string problem;
};

WindingCase winding_case(std::uint64_t seed, std::size_t idx) {
  Rng rng = instance_rng(seed, 6, idx);
  const auto d = std::make_shared<const Domain>(Domain::rectangle(-1.0, -1.0, 1.0, 1.0));
  const GridSpec grid{d->bbox(), 256, 256};
  const double h = grid.hx();

  std::vector<Vortex> vs;
  const int count = static_cast<int>(rng.integer(1, 5));
  while (static_cast<int>(vs.size()) < count) {
    const Point2 p{rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)};
    if (std::any_of(vs.begin(), vs.end(), [&](const Vortex& v) { return distance(v.center, p) < 4.0 * h; })) continue;
    static constexpr int kDegrees[] = {-2, -1, 1, 2};
    vs.push_back({p, kDegrees[rng.integer(0, 3)]});
  }
  const MapFamily f = make_multi_vortex(vs, rng.uniform(0.0, 2.0 * kPi));
  const WindingChart chart = winding_per_plaquette(sample(f, grid, *d));

  WindingCase wc;
  wc.vortices = count;
  wc.unreliable = chart.unreliable.size();

  // Multiplicity: unit atoms of each sign, matched by cell distance.
  const auto extracted = to_signed_atoms(atoms_from_windings(chart, d));
  const auto analytic = to_signed_atoms(analytic_jacobian_atoms(f, d));
  auto total = [](const SignedAtomList& a) {
    return std::accumulate(a.begin(), a.end(), 0, [](int s, const SignedAtom& x) { return s + x.multiplicity; });
  };
  bool ok = total(extracted) == total(analytic);
  auto cell = [&](Point2 p) {
    return std::pair<long, long>{static_cast<long>(std::floor((p.x - grid.box.xmin) / h)),
                                 static_cast<long>(std::floor((p.y - grid.box.ymin) / grid.hy()))};
  };
  for (const int sign : {1, -1}) {
    std::vector<std::pair<long, long>> got, want;
    for (const auto& c : chart.cells) {
      for (int k = 0; k < std::abs(c.winding); ++k) {
        if ((c.winding > 0) == (sign > 0)) got.emplace_back(static_cast<long>(c.i), static_cast<long>(c.j));
      }
    }
    for (const auto& v : vs) {
      for (int k = 0; k < std::abs(v.degree); ++k) {
        if ((v.degree > 0) == (sign > 0)) want.push_back(cell(v.center));
      }
    }
    if (got.size() != want.size()) {
      ok = false;
      wc.problem = "unit atom count differs";
      continue;
    }
    const std::size_t n = got.size();
    std::vector<double> cost(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        cost[a * n + b] = static_cast<double>(
            std::max(std::abs(got[a].first - want[b].first), std::abs(got[a].second - want[b].second)));
      }
    }
    const auto match = solve_assignment(cost, n);
    for (std::size_t a = 0; a < n; ++a) {
      wc.max_cell_offset = std::max(wc.max_cell_offset, static_cast<int>(cost[a * n + match[a]]));
    }
  }
  wc.atoms_ok = ok && wc.max_cell_offset <= 1;

  wc.circles_ok = true;
  while (wc.circles_checked < 20) {
    const Point2 c{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const double r = rng.uniform(0.1, 1.0);
    if (std::any_of(vs.begin(), vs.end(), [&](const Vortex& v) { return std::abs(distance(v.center, c) - r) < 3 * h; })) {
      continue;
    }
    ++wc.circles_checked;
    int enclosed = 0;
    for (const auto& cw : chart.cells) {
      if (distance(cw.center, c) < r) enclosed += cw.winding;
    }
    if (degree_on_circle(f, c, r, 2048) != enclosed) {
      wc.circles_ok = false;
      wc.problem = "circle degree differs from enclosed windings";
    }
  }
  return wc;
}

Criterion winding_extraction(std::uint64_t seed, json& art) {
  Stopwatch sw;
  Criterion c{6, "winding extraction", true, "", 0.0, 60.0};
  std::vector<WindingCase> cases(50);
  parallel_for(cases.size(), [&](std::size_t i) { cases[i] = winding_case(seed, i); });
  std::size_t atoms_ok = 0, circles_ok = 0, unreliable = 0;
  int worst = 0;
  json rows = json::array();
  for (const auto& wc : cases) {
    atoms_ok += wc.atoms_ok;
    circles_ok += wc.circles_ok;
    unreliable += wc.unreliable;
    worst = std::max(worst, wc.max_cell_offset);
    rows.push_back({{"vortices", wc.vortices},
                    {"atoms_ok", wc.atoms_ok},
                    {"circles_ok", wc.circles_ok},
                    {"max_cell_offset", wc.max_cell_offset},
                    {"problem", wc.problem}});
  }
  c.seconds = sw.seconds();
  c.passed = atoms_ok == cases.size() && circles_ok == cases.size();
  c.detail = "atoms match " + std::to_string(atoms_ok) + "/50 (max cell offset " + std::to_string(worst) +
             "), circle degrees match " + std::to_string(circles_ok) + "/50, flagged plaquettes " +
             std::to_string(unreliable);
  art = {{"configurations", cases.size()}, {"atoms_ok", atoms_ok},       {"circles_ok", circles_ok},
         {"max_cell_offset", worst},       {"flagged_plaquettes", unreliable}, {"rows", rows},
         {"passed", c.passed}};
  return c;
}

// ---- criterion 7 -----------------------------------------------------------

Criterion vortex_area(json& art) {
  Stopwatch sw;
  Criterion c{7, "vortex area benchmark", true, "", 0.0, 0.0};
  const MapFamily uv = make_multi_vortex({{{0.0, 0.0}, 1}});
  const AreaReport rep = relaxed_area_upper_bound(uv, unit_disc());
  const double oracle = kPi * (std::sqrt(2.0) + std::asinh(1.0));
  const double rel = std::abs(rep.dirichlet_area - oracle) / oracle;
  const double extra = std::abs(rep.upper_bound - rep.dirichlet_area - kPi);
  c.seconds = sw.seconds();
  c.passed = rel <= 1e-4 && extra <= 1e-12;
  c.detail = "dirichlet " + fmt("%.8f", rep.dirichlet_area) + " vs " + fmt("%.8f", oracle) + " (rel " +
             fmt("%.3g", rel) + ", tol 1e-4); bound - dirichlet - pi = " + fmt("%.3g", extra);
  art = {{"dirichlet_area", rep.dirichlet_area},
         {"oracle", oracle},
         {"relative_error", rel},
         {"singular_term", rep.singular_term},
         {"upper_bound", rep.upper_bound},
         {"estimated_quadrature_error", rep.quadrature.estimated_error},
         {"passed", c.passed}};
  return c;
}

// ---- criterion 8 -----------------------------------------------------------

// Independent prefix search: sort by length, grow the puncture set pair by pair.
std::vector<Point2> reference_punctures(const AtomicDistribution& t, double eps) {
  const AtomicDistribution p = to_property_P(t);
  std::vector<PolePair> pairs(p.pairs().begin(), p.pairs().end());
  std::vector<std::size_t> idx(pairs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return distance(pairs[a].x, pairs[a].y) > distance(pairs[b].x, pairs[b].y);
  });
  std::vector<Point2> cut;
  for (std::size_t m = 0; m <= idx.size(); ++m) {
    if (m > 0) {
      for (const Point2 q : {pairs[idx[m - 1]].x, pairs[idx[m - 1]].y}) {
        if (contains(p.domain(), q) == Membership::interior) cut.push_back(q);
      }
    }
    if (solve_matching(restrict(p, cut), NormKind{2.0}).value <= eps / kPi) return cut;
  }
  return cut;
}

Criterion double_relaxation(std::uint64_t seed, json& art) {
  Stopwatch sw;
  Criterion c{8, "double relaxation", true, "", 0.0, 0.0};
  const DomainPtr d = unit_disc();

  // Puncturing every center removes the singular term.
  std::size_t envelope_ok = 0;
  json maps = json::array();
  const std::size_t n_maps = 4;
  for (std::size_t i = 0; i < n_maps; ++i) {
    Rng rng = instance_rng(seed, 8, i);
    std::vector<Vortex> vs;
    const int count = static_cast<int>(rng.integer(1, 4));
    while (static_cast<int>(vs.size()) < count) {
      const Point2 p = sample_in_disc({0.0, 0.0}, 0.8, rng);
      if (std::any_of(vs.begin(), vs.end(), [&](const Vortex& v) { return distance(v.center, p) < 0.05; })) continue;
      static constexpr int kDegrees[] = {-2, -1, 1, 2};
      vs.push_back({p, kDegrees[rng.integer(0, 3)]});
    }
    const MapFamily f = make_multi_vortex(vs);
    std::vector<Point2> all, half;
    for (std::size_t k = 0; k < vs.size(); ++k) {
      all.push_back(vs[k].center);
      if (2 * k < vs.size()) half.push_back(vs[k].center);
    }
    const AreaReport full = relaxed_area_upper_bound(f, d);
    const AreaReport part = punctured_upper_bound(f, d, half);
    const AreaReport none = punctured_upper_bound(f, d, all);
    const double dbl = double_relaxation_value(f, *d);
    const double qtol = std::max(full.quadrature.estimated_error, 1e-12);
    const bool ok = none.singular_term == 0.0 && std::abs(none.upper_bound - dbl) <= qtol &&
                    dbl <= part.upper_bound + qtol && part.upper_bound <= full.upper_bound + qtol;
    envelope_ok += ok;
    maps.push_back({{"vortices", vs.size()},
                    {"dirichlet_area", dbl},
                    {"bound_all_punctured", none.upper_bound},
                    {"bound_half_punctured", part.upper_bound},
                    {"bound_unpunctured", full.upper_bound},
                    {"ok", ok}});
  }

  // Puncture-set prefixes against an exact re-solve.
  std::size_t prefix_ok = 0, prefix_total = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    Rng rng = instance_rng(seed, 80, i);
    std::vector<PolePair> pairs;
    for (int k = 0; k < 5; ++k) pairs.push_back({sample_in_domain(*d, rng), sample_in_domain(*d, rng)});
    const AtomicDistribution t(d, pairs);
    const double v = solve_matching(t, NormKind{2.0}).value;
    for (const double frac : {2.0, 0.75, 0.4, 0.15, 0.02}) {
      const double eps = kPi * v * frac;
      const auto got = puncture_set_for_eps(t, eps);
      const auto want = reference_punctures(t, eps);
      const double rest = solve_matching(restrict(t, got), NormKind{2.0}).value;
      ++prefix_total;
      prefix_ok += got == want && rest <= eps / kPi;
    }
  }

  c.seconds = sw.seconds();
  c.passed = envelope_ok == n_maps && prefix_ok == prefix_total;
  c.detail = "envelope " + std::to_string(envelope_ok) + "/" + std::to_string(n_maps) + ", puncture prefixes " +
             std::to_string(prefix_ok) + "/" + std::to_string(prefix_total);
  art = {{"maps", maps}, {"prefix_checks", prefix_total}, {"prefix_ok", prefix_ok}, {"passed", c.passed}};
  return c;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.passed; });
}

SuiteReport run_suite(std::uint64_t seed) {
  SuiteReport rep;
  json art = json::object();
  std::vector<OracleCase> oracle;
  std::vector<DualCase> dual;
  rep.criteria.push_back(vortex_law(art["1"]));
  rep.criteria.push_back(oracle_equivalence(seed, oracle, art["2"]));
  rep.criteria.push_back(strong_duality(seed, dual, art["3"]));
  rep.criteria.push_back(minimizer_structure(dual, art["4"]));
  rep.criteria.push_back(trivial_bound(oracle, dual, art["5"]));
  rep.criteria.push_back(winding_extraction(seed, art["6"]));
  rep.criteria.push_back(vortex_area(art["7"]));
  rep.criteria.push_back(double_relaxation(seed, art["8"]));
  for (auto& c : rep.criteria) {
    if (c.time_limit > 0.0 && c.seconds >= c.time_limit) c.passed = false;
  }
  rep.artifact = {{"seed", seed}, {"criteria", art}};
  return rep;
}

SuiteReport run_acceptance(std::uint64_t seed) {
  SuiteReport first = run_suite(seed);
  Stopwatch sw;
  const SuiteReport second = run_suite(seed);
  Criterion c{9, "determinism", true, "", 0.0, 0.0};
  const std::string a = first.artifact.dump(2);
  const std::string b = second.artifact.dump(2);
  c.seconds = sw.seconds();
  c.passed = a == b;
  c.detail = c.passed ? "two runs produced identical " + std::to_string(a.size()) + "-byte artifacts"
                      : "artifacts of two runs differ";
  first.criteria.push_back(c);
  return first;
}

std::string format_line(const Criterion& c) {
  std::string line = std::string(c.passed ? "[PASS] " : "[FAIL] ") + std::to_string(c.id) + " " + c.title + ": " +
                     c.detail + " [" + fmt("%.2f", c.seconds) + " s";
  if (c.time_limit > 0.0) line += ", limit " + fmt("%.0f", c.time_limit) + " s";
  return line + "]";
}

}  // namespace flatconn::selftest
