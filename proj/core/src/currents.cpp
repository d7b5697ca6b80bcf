#include "flatconn/currents.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "flatconn/errors.hpp"

namespace flatconn {

namespace {

constexpr double kPairTol = 1e-9;

bool is_interior(const Domain& d, Point2 p) { return contains(d, p) == Membership::interior; }

}  // namespace

AtomicDistribution::AtomicDistribution(DomainPtr domain, std::vector<PolePair> pairs)
    : domain_(std::move(domain)), pairs_(std::move(pairs)) {
  if (!domain_) throw ArgumentError("atomic distribution needs a domain");
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const auto& pp = pairs_[i];
    if (!is_finite(pp.x) || !is_finite(pp.y)) throw DomainError("pair " + std::to_string(i) + " is not finite");
    if (pp.x == pp.y) throw ArgumentError("pair " + std::to_string(i) + " has coincident poles");
    if (contains(*domain_, pp.x) == Membership::exterior || contains(*domain_, pp.y) == Membership::exterior) {
      throw DomainError("pair " + std::to_string(i) + " has a pole outside the domain closure");
    }
  }
  satisfies_P_ = has_property_P(*this);
  satisfies_Pf_ = satisfies_P_ && has_property_Pf(*this);
}

AtomicDistribution AtomicDistribution::with_measure_scale(double scale) const {
  AtomicDistribution out = *this;
  out.measure_scale_ = scale;
  return out;
}

bool has_property_P(const AtomicDistribution& t) {
  const Domain& d = t.domain();
  for (const auto& pp : t.pairs()) {
    if (std::abs(distance(pp.x, pp.y) - dbar(d, pp.x, pp.y).value) > kPairTol) return false;
  }
  return true;
}

bool has_property_Pf(const AtomicDistribution& t) {
  const Domain& d = t.domain();
  std::vector<Point2> plus;
  std::vector<Point2> minus;
  for (const auto& pp : t.pairs()) {
    const bool xi = is_interior(d, pp.x);
    const bool yi = is_interior(d, pp.y);
    if (xi == yi) return false;
    if (std::abs(distance(pp.x, pp.y) - dbar(d, pp.x, pp.y).value) > kPairTol) return false;
    (xi ? plus : minus).push_back(xi ? pp.x : pp.y);
  }
  for (const Point2 p : plus) {
    for (const Point2 q : minus) {
      if (distance(p, q) <= d.eps_geom()) return false;
    }
  }
  return true;
}

AtomicDistribution from_signed_atoms(const SignedAtomList& atoms, DomainPtr domain) {
  if (!domain) throw ArgumentError("from_signed_atoms needs a domain");
  const Domain& d = *domain;
  std::vector<Point2> plus;
  std::vector<Point2> minus;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    if (a.multiplicity == 0) throw ArgumentError("atom " + std::to_string(i) + " has zero multiplicity");
    const Membership m = contains(d, a.location);
    if (m == Membership::exterior) {
      throw DomainError("atom " + std::to_string(i) + " lies outside the domain closure");
    }
    if (m == Membership::boundary) continue;
    auto& bucket = a.multiplicity > 0 ? plus : minus;
    for (int k = 0; k < std::abs(a.multiplicity); ++k) bucket.push_back(a.location);
  }

  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  candidates.reserve(plus.size() * minus.size());
  for (std::size_t i = 0; i < plus.size(); ++i) {
    for (std::size_t j = 0; j < minus.size(); ++j) candidates.emplace_back(distance(plus[i], minus[j]), i, j);
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<bool> plus_used(plus.size(), false);
  std::vector<bool> minus_used(minus.size(), false);
  std::vector<PolePair> pairs;
  for (const auto& [dist, i, j] : candidates) {
    if (plus_used[i] || minus_used[j]) continue;
    plus_used[i] = minus_used[j] = true;
    if (dist <= d.eps_geom()) continue;  // coincident opposite atoms cancel
    pairs.push_back({plus[i], minus[j]});
  }
  for (std::size_t i = 0; i < plus.size(); ++i) {
    if (!plus_used[i]) pairs.push_back({plus[i], nearest_boundary_point(d, plus[i])});
  }
  for (std::size_t j = 0; j < minus.size(); ++j) {
    if (!minus_used[j]) pairs.push_back({nearest_boundary_point(d, minus[j]), minus[j]});
  }
  return AtomicDistribution(std::move(domain), std::move(pairs));
}

SignedAtomList to_signed_atoms(const AtomicDistribution& t) {
  const Domain& d = t.domain();
  SignedAtomList out;
  auto add = [&](Point2 p, int sign) {
    if (!is_interior(d, p)) return;
    for (auto& a : out) {
      if (distance(a.location, p) <= d.eps_geom()) {
        a.multiplicity += sign;
        return;
      }
    }
    out.push_back({p, sign});
  };
  for (const auto& pp : t.pairs()) {
    add(pp.x, +1);
    add(pp.y, -1);
  }
  std::erase_if(out, [](const SignedAtom& a) { return a.multiplicity == 0; });
  return out;
}

AtomicDistribution to_property_P(const AtomicDistribution& t) {
  const Domain& d = t.domain();
  std::vector<PolePair> pairs;
  for (const auto& pp : t.pairs()) {
    const bool xi = is_interior(d, pp.x);
    const bool yi = is_interior(d, pp.y);
    if (!xi && !yi) continue;
    if (dbar(d, pp.x, pp.y).route == Route::direct) {
      pairs.push_back(pp);
      continue;
    }
    if (xi) pairs.push_back({pp.x, nearest_boundary_point(d, pp.x)});
    if (yi) pairs.push_back({nearest_boundary_point(d, pp.y), pp.y});
  }
  return AtomicDistribution(t.domain_ptr(), std::move(pairs)).with_measure_scale(t.measure_scale());
}

AtomicDistribution to_property_Pf(const AtomicDistribution& t) {
  const AtomicDistribution p = t.satisfies_P() ? t : to_property_P(t);
  const Domain& d = p.domain();
  std::vector<PolePair> pairs;
  for (const auto& pp : p.pairs()) {
    const bool xi = is_interior(d, pp.x);
    const bool yi = is_interior(d, pp.y);
    if (xi && yi) {
      pairs.push_back({pp.x, nearest_boundary_point(d, pp.x)});
      pairs.push_back({nearest_boundary_point(d, pp.y), pp.y});
    } else if (xi || yi) {
      pairs.push_back(pp);
    }
  }

  // cancel an interior + and an interior - sitting at the same point
  std::vector<bool> dropped(pairs.size(), false);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (dropped[i] || !is_interior(d, pairs[i].x)) continue;
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (dropped[j] || j == i || !is_interior(d, pairs[j].y)) continue;
      if (distance(pairs[i].x, pairs[j].y) <= d.eps_geom()) {
        dropped[i] = dropped[j] = true;
        break;
      }
    }
  }
  std::vector<PolePair> kept;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!dropped[i]) kept.push_back(pairs[i]);
  }
  return AtomicDistribution(p.domain_ptr(), std::move(kept)).with_measure_scale(t.measure_scale());
}

double evaluate(const AtomicDistribution& t, const ScalarField& phi) {
  double s = 0.0;
  for (const auto& pp : t.pairs()) s += phi(pp.x) - phi(pp.y);
  return s;
}

double trivial_upper_bound(const AtomicDistribution& t, double beta) {
  if (!(beta > 0.0)) throw ArgumentError("beta must be positive");
  const AtomicDistribution p = t.satisfies_P() ? t : to_property_P(t);
  double s = 0.0;
  for (const auto& pp : p.pairs()) s += distance(pp.x, pp.y);
  return beta * s;
}

AtomicDistribution restrict(const AtomicDistribution& t, std::span<const Point2> punctures, double eps_match) {
  const Domain& d0 = t.domain();
  if (eps_match <= 0.0) eps_match = 1e-7 * d0.diameter();
  std::vector<Point2> inside;
  for (const Point2 c : punctures) {
    if (contains(d0, c) != Membership::exterior) inside.push_back(c);
  }
  auto domain = std::make_shared<const Domain>(d0.with_punctures(inside));
  const Domain& d = *domain;

  auto hit = [&](Point2 p) {
    return std::any_of(d.punctures().begin(), d.punctures().end(),
                       [&](Point2 c) { return distance(p, c) <= eps_match; });
  };

  std::vector<PolePair> pairs;
  for (const auto& pp : t.pairs()) {
    const bool xr = hit(pp.x);
    const bool yr = hit(pp.y);
    if (!xr && !yr) {
      pairs.push_back(pp);
    } else if (!xr && is_interior(d, pp.x)) {
      pairs.push_back({pp.x, nearest_boundary_point(d, pp.x)});
    } else if (!yr && is_interior(d, pp.y)) {
      pairs.push_back({nearest_boundary_point(d, pp.y), pp.y});
    }
  }
  return AtomicDistribution(std::move(domain), std::move(pairs)).with_measure_scale(t.measure_scale());
}

}  // namespace flatconn
