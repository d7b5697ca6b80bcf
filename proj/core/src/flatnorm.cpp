#include "flatconn/flatnorm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "flatconn/assignment.hpp"
#include "flatconn/errors.hpp"

namespace flatconn {

namespace {

constexpr double kTieSlack = 1e-12;
constexpr double kCheckTol = 1e-9;
constexpr long kCharge = -1;  // choice[k] for k in I_P

bool is_interior(const Domain& d, Point2 p) { return contains(d, p) == Membership::interior; }

AtomicDistribution canonical(const AtomicDistribution& t) {
  return t.satisfies_Pf() ? t : to_property_Pf(t);
}

// choice[k] = kCharge puts k in I_P, otherwise choice[k] = tau(k).
Decomposition assemble(const AtomicDistribution& pf, NormKind kind, const std::vector<long>& choice) {
  const Domain& d = pf.domain();
  const auto pairs = pf.pairs();
  const std::size_t n = pairs.size();
  Decomposition dec;
  dec.kind = kind;

  std::vector<bool> targeted(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (choice[k] == kCharge) {
      dec.assignment.charges.push_back(k);
      if (is_interior(d, pairs[k].x)) dec.R.push_back({pairs[k].x, +1});
      continue;
    }
    const auto j = static_cast<std::size_t>(choice[k]);
    targeted[j] = true;
    dec.assignment.dipoles.push_back(k);
    dec.assignment.tau.push_back(j);
    const Point2 a = pairs[j].y;
    const Point2 b = pairs[k].x;
    dec.assignment.routes.push_back(is_interior(d, a) && is_interior(d, b) ? Route::direct : Route::via_boundary);
    if (a != b) dec.S.emplace_back(a, b);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!targeted[j] && is_interior(d, pairs[j].y)) dec.R.push_back({pairs[j].y, -1});
  }
  dec.value = mass_R(dec.R, d) + kind.beta * mass_S(dec.S, d);
  return dec;
}

}  // namespace

NormKind::NormKind(double b) : beta(b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw ArgumentError("beta must be a positive finite number");
}

double mass_R(const SignedAtomList& r, const Domain& d) {
  double m = 0.0;
  for (const auto& a : r) {
    if (is_interior(d, a.location)) m += std::abs(a.multiplicity);
  }
  return m;
}

double mass_S(const std::vector<Segment>& s, const Domain& d) {
  double m = 0.0;
  for (const auto& seg : s) m += segment_length_inside(d, seg);
  return m;
}

Decomposition solve_bruteforce(const AtomicDistribution& t, NormKind kind) {
  const AtomicDistribution pf = canonical(t);
  const std::size_t n = pf.size();
  if (n > kBruteforceLimit) {
    throw GuardError("bruteforce solver accepts at most " + std::to_string(kBruteforceLimit) +
                     " pole pairs, got " + std::to_string(n) + "; use solve_matching");
  }
  const Domain& d = pf.domain();
  const auto pairs = pf.pairs();

  std::vector<double> charge_x(n), charge_y(n), seg(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    charge_x[k] = is_interior(d, pairs[k].x) ? 1.0 : 0.0;
    charge_y[k] = is_interior(d, pairs[k].y) ? 1.0 : 0.0;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (pairs[j].y != pairs[k].x) seg[k * n + j] = kind.beta * segment_length_inside(d, Segment(pairs[j].y, pairs[k].x));
    }
  }

  std::vector<long> choice(n, kCharge), best_choice(n, kCharge);
  std::vector<bool> used(n, false);
  double best = std::numeric_limits<double>::infinity();

  std::function<void(std::size_t, double)> visit = [&](std::size_t k, double partial) {
    if (k == n) {
      double total = partial;
      for (std::size_t j = 0; j < n; ++j) {
        if (!used[j]) total += charge_y[j];
      }
      if (total < best - kTieSlack) {
        best = total;
        best_choice = choice;
      }
      return;
    }
    choice[k] = kCharge;
    visit(k + 1, partial + charge_x[k]);
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      choice[k] = static_cast<long>(j);
      visit(k + 1, partial + seg[k * n + j]);
      used[j] = false;
    }
    choice[k] = kCharge;
  };
  visit(0, 0.0);

  return assemble(pf, kind, best_choice);
}

Decomposition solve_matching(const AtomicDistribution& t, NormKind kind) {
  const AtomicDistribution pf = canonical(t);
  const Domain& d = pf.domain();
  const auto pairs = pf.pairs();
  const double beta = kind.beta;

  std::vector<std::size_t> pos, neg;  // pair indices with an interior positive / negative pole
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (is_interior(d, pairs[k].x)) pos.push_back(k);
    if (is_interior(d, pairs[k].y)) neg.push_back(k);
  }
  const std::size_t a = pos.size();
  const std::size_t b = neg.size();
  const std::size_t n = a + b;

  std::vector<double> escape_pos(a), escape_neg(b);
  double big = 1.0;
  for (std::size_t i = 0; i < a; ++i) {
    escape_pos[i] = std::min(1.0, beta * dist_to_boundary(d, pairs[pos[i]].x));
  }
  for (std::size_t j = 0; j < b; ++j) {
    escape_neg[j] = std::min(1.0, beta * dist_to_boundary(d, pairs[neg[j]].y));
  }
  big += beta * d.diameter();
  const double forbidden = 1e3 * big * static_cast<double>(n + 1);

  // Rows: positives, then one virtual row per negative.
  // Columns: negatives, then one virtual column per positive.
  std::vector<double> cost(n * n, forbidden);
  for (std::size_t i = 0; i < a; ++i) {
    const Point2 p = pairs[pos[i]].x;
    for (std::size_t j = 0; j < b; ++j) {
      const Point2 q = pairs[neg[j]].y;
      if (segment_in_closure(d, Segment(q, p))) cost[i * n + j] = beta * distance(p, q);
    }
    cost[i * n + b + i] = escape_pos[i];
  }
  for (std::size_t j = 0; j < b; ++j) {
    cost[(a + j) * n + j] = escape_neg[j];
    for (std::size_t i = 0; i < a; ++i) cost[(a + j) * n + b + i] = 0.0;
  }

  const auto col = solve_assignment(cost, n);

  std::vector<long> choice(pairs.size(), kCharge);
  for (std::size_t i = 0; i < a; ++i) {
    const std::size_t k = pos[i];
    if (col[i] < b) {
      choice[k] = static_cast<long>(neg[col[i]]);
    } else if (beta * dist_to_boundary(d, pairs[k].x) <= 1.0) {
      choice[k] = static_cast<long>(k);
    }
  }
  for (std::size_t j = 0; j < b; ++j) {
    const std::size_t k = neg[j];
    if (col[a + j] == j && beta * dist_to_boundary(d, pairs[k].y) <= 1.0) choice[k] = static_cast<long>(k);
  }
  return assemble(pf, kind, choice);
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped_degenerate: return "skipped-degenerate";
    case CheckStatus::not_applicable: return "not-applicable";
  }
  return "unknown";
}

bool StructureReport::hard_failure() const {
  return a == CheckStatus::fail || b == CheckStatus::fail || e == CheckStatus::fail || f == CheckStatus::fail ||
         g == CheckStatus::fail || h == CheckStatus::fail;
}

namespace {

struct Contact {
  enum Kind { none, point, overlap } kind = none;
  Point2 p{}, q{};  // contact point, or the two ends of the overlap
};

Contact intersect(const Segment& s1, const Segment& s2, double tol) {
  const Point2 r = s1.b() - s1.a();
  const Point2 s = s2.b() - s2.a();
  const Point2 w = s2.a() - s1.a();
  const double denom = cross(r, s);
  const double scale = norm(r) * norm(s);
  if (std::abs(denom) > tol * scale) {
    const double t = cross(w, s) / denom;
    const double u = cross(w, r) / denom;
    const double et = tol / norm(r);
    const double eu = tol / norm(s);
    if (t < -et || t > 1 + et || u < -eu || u > 1 + eu) return {};
    return {Contact::point, s1.at(std::clamp(t, 0.0, 1.0)), {}};
  }
  if (std::abs(cross(w, r)) > tol * norm(r)) return {};  // parallel, not collinear
  const double rr = dot(r, r);
  double t0 = dot(w, r) / rr;
  double t1 = dot(s2.b() - s1.a(), r) / rr;
  if (t0 > t1) std::swap(t0, t1);
  const double lo = std::max(0.0, t0);
  const double hi = std::min(1.0, t1);
  const double et = tol / std::sqrt(rr);
  if (hi < lo - et) return {};
  if (hi - lo <= et) return {Contact::point, s1.at(std::clamp(0.5 * (lo + hi), 0.0, 1.0)), {}};
  return {Contact::overlap, s1.at(lo), s1.at(hi)};
}

bool near(Point2 p, Point2 q, double tol) { return distance(p, q) <= tol; }

}  // namespace

StructureReport verify_structure(const Decomposition& dec, const AtomicDistribution& t, const Domain& d) {
  StructureReport rep;
  const double tol = kCheckTol;

  double sum_len = 0.0;
  for (const auto& s : dec.S) sum_len += s.length();
  rep.h = std::abs(mass_S(dec.S, d) - sum_len) <= tol ? CheckStatus::pass : CheckStatus::fail;
  if (rep.h == CheckStatus::fail) rep.notes.push_back("(h) segment mass differs from the sum of segment lengths");

  if (std::abs(dec.kind.beta - 2.0) > 0.0) {
    rep.notes.push_back("(a)-(g) are only stated for beta = 2");
    return rep;
  }

  // (a)
  rep.a = CheckStatus::pass;
  for (std::size_t i = 0; i < dec.R.size(); ++i) {
    const auto& ri = dec.R[i];
    if (!is_interior(d, ri.location)) continue;
    if (dist_to_boundary(d, ri.location) < 0.5 - tol) {
      rep.a = CheckStatus::fail;
      rep.notes.push_back("(a) free charge " + std::to_string(i) + " closer than 1/2 to the boundary");
    }
    for (std::size_t j = i + 1; j < dec.R.size(); ++j) {
      const auto& rj = dec.R[j];
      if (ri.multiplicity * rj.multiplicity >= 0 || !is_interior(d, rj.location)) continue;
      if (distance(ri.location, rj.location) < 1.0 - tol) {
        rep.a = CheckStatus::fail;
        rep.notes.push_back("(a) opposite free charges " + std::to_string(i) + ", " + std::to_string(j) +
                            " closer than 1");
      }
    }
  }
  const AtomicDistribution pf = canonical(t);
  const auto& asg = dec.assignment;
  if (asg.dipoles.size() == asg.tau.size()) {
    for (std::size_t m = 0; m < asg.dipoles.size(); ++m) {
      const std::size_t k = asg.dipoles[m];
      const std::size_t j = asg.tau[m];
      if (k >= pf.size() || j >= pf.size()) continue;
      const bool xi = is_interior(d, pf.pairs()[k].x);
      const bool yi = is_interior(d, pf.pairs()[j].y);
      if (xi != yi && k != j) {
        rep.a = CheckStatus::fail;
        rep.notes.push_back("(a) boundary dipole " + std::to_string(k) + " not joined to its own shadow");
      }
    }
  }

  // (b)
  rep.b = CheckStatus::pass;
  for (std::size_t i = 0; i < dec.S.size(); ++i) {
    const auto& s = dec.S[i];
    const double len = s.length();
    const double da = dist_to_boundary(d, s.a());
    const double db = dist_to_boundary(d, s.b());
    const bool ok = segment_in_closure(d, s) && len <= std::min(1.0, da + db) + tol &&
                    len <= 0.5 + std::min(da, db) + tol;
    if (!ok) {
      rep.b = CheckStatus::fail;
      rep.notes.push_back("(b) dipole " + std::to_string(i) + " leaves the domain or is too long");
    }
  }

  // Degenerate position: coincident or three collinear interior points.
  std::vector<Point2> pts;
  for (const auto& r : dec.R) {
    if (is_interior(d, r.location)) pts.push_back(r.location);
  }
  for (const auto& s : dec.S) {
    if (is_interior(d, s.a())) pts.push_back(s.a());
    if (is_interior(d, s.b())) pts.push_back(s.b());
  }
  const double gtol = 1e-12 * std::max(1.0, d.diameter());
  for (std::size_t i = 0; i < pts.size() && !rep.degenerate; ++i) {
    for (std::size_t j = i + 1; j < pts.size() && !rep.degenerate; ++j) {
      if (near(pts[i], pts[j], gtol)) {
        rep.degenerate = true;
        break;
      }
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        if (std::abs(cross(pts[j] - pts[i], pts[k] - pts[i])) <= gtol * std::max(1.0, d.diameter())) {
          rep.degenerate = true;
          break;
        }
      }
    }
  }
  if (rep.degenerate) {
    rep.e = rep.f = rep.g = CheckStatus::skipped_degenerate;
    rep.notes.push_back("(e)-(g) skipped: interior points coincide or are collinear");
    return rep;
  }

  rep.e = rep.f = rep.g = CheckStatus::pass;
  for (std::size_t i = 0; i < dec.S.size(); ++i) {
    for (std::size_t j = i + 1; j < dec.S.size(); ++j) {
      const Segment& s1 = dec.S[i];
      const Segment& s2 = dec.S[j];
      const Contact c = intersect(s1, s2, gtol);
      if (c.kind == Contact::none) continue;
      const std::string tag = std::to_string(i) + ", " + std::to_string(j);
      if (c.kind == Contact::point) {
        if (contains(d, c.p) != Membership::interior) continue;
        rep.g = CheckStatus::fail;
        const bool common_end = (near(c.p, s1.a(), gtol) && near(c.p, s2.a(), gtol)) ||
                                (near(c.p, s1.b(), gtol) && near(c.p, s2.b(), gtol));
        if (!common_end) {
          rep.e = CheckStatus::fail;
          rep.notes.push_back("(e) dipoles " + tag + " touch away from a common end");
        }
        rep.notes.push_back("(g) dipoles " + tag + " meet inside the domain");
      } else {
        rep.g = CheckStatus::fail;
        auto same = [&](Point2 u, Point2 v) {
          return (near(c.p, u, gtol) && near(c.q, v, gtol)) || (near(c.p, v, gtol) && near(c.q, u, gtol));
        };
        if (!same(s1.a(), s2.b()) && !same(s2.a(), s1.b())) {
          rep.f = CheckStatus::fail;
          rep.notes.push_back("(f) dipoles " + tag + " overlap in a nested way");
        }
        rep.notes.push_back("(g) dipoles " + tag + " overlap");
      }
    }
  }
  return rep;
}

}  // namespace flatconn
