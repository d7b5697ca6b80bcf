#include <doctest.h>

#include <cmath>
#include <numbers>

#include "flatconn/currents.hpp"
#include "flatconn/errors.hpp"

using namespace flatconn;

namespace {

DomainPtr disc(double r = 1.0) { return std::make_shared<const Domain>(Domain::disc({0.0, 0.0}, r, 720)); }

int total_sign(const SignedAtomList& atoms) {
  int s = 0;
  for (const auto& a : atoms) s += a.multiplicity;
  return s;
}

}  // namespace

TEST_CASE("pairs must lie in the closure") {
  const auto d = disc();
  CHECK_THROWS_AS(AtomicDistribution(d, {{{0.0, 0.0}, {2.0, 0.0}}}), DomainError);
  CHECK_THROWS_AS(AtomicDistribution(d, {{{0.1, 0.0}, {0.1, 0.0}}}), ArgumentError);
  CHECK(AtomicDistribution(d, {}).empty());
}

TEST_CASE("signed atoms become pole pairs") {
  const auto d = disc();
  const auto single = from_signed_atoms({{{0.0, 0.0}, 1}}, d);
  REQUIRE(single.size() == 1);
  CHECK(single.pairs()[0].x == Point2{0.0, 0.0});
  CHECK(distance(single.pairs()[0].y, {0.0, 0.0}) == doctest::Approx(std::cos(std::numbers::pi / 720)));
  CHECK(contains(*d, single.pairs()[0].y) == Membership::boundary);

  CHECK(from_signed_atoms({}, d).empty());

  const auto dipole = from_signed_atoms({{{0.2, 0.1}, 1}, {{-0.3, 0.0}, -1}}, d);
  REQUIRE(dipole.size() == 1);
  CHECK(dipole.pairs()[0].x == Point2{0.2, 0.1});
  CHECK(dipole.pairs()[0].y == Point2{-0.3, 0.0});

  // Multiplicities expand into unit atoms; nearest opposite atoms pair first.
  const auto multi = from_signed_atoms({{{0.0, 0.0}, 2}, {{0.1, 0.0}, -1}, {{0.8, 0.0}, -1}}, d);
  CHECK(multi.size() == 2);
  CHECK(total_sign(to_signed_atoms(multi)) == 0);
  CHECK(to_signed_atoms(multi).size() == 3);
}

TEST_CASE("signed atom round trip") {
  const auto d = disc();
  const SignedAtomList atoms{{{0.1, 0.2}, 1}, {{-0.4, 0.1}, -2}, {{0.5, -0.5}, 1}, {{0.0, 0.6}, 1}};
  const auto back = to_signed_atoms(from_signed_atoms(atoms, d));
  REQUIRE(back.size() == atoms.size());
  for (const auto& a : atoms) {
    int m = 0;
    for (const auto& b : back) {
      if (b.location == a.location) m += b.multiplicity;
    }
    CHECK(m == a.multiplicity);
  }
}

TEST_CASE("property P splits pairs that are cheaper through the boundary") {
  const auto d = disc();
  const AtomicDistribution far(d, {{{-0.9, 0.0}, {0.9, 0.0}}});
  CHECK_FALSE(far.satisfies_P());
  const auto p = to_property_P(far);
  CHECK(p.satisfies_P());
  REQUIRE(p.size() == 2);
  for (const auto& pp : p.pairs()) {
    const bool left = pp.x == Point2{-0.9, 0.0};
    if (left) {
      CHECK(pp.y.x == doctest::Approx(-1.0).epsilon(1e-4));
    } else {
      CHECK(pp.y == Point2{0.9, 0.0});
      CHECK(pp.x.x == doctest::Approx(1.0).epsilon(1e-4));
    }
  }
  const AtomicDistribution near(d, {{{0.1, 0.0}, {0.3, 0.0}}});
  CHECK(near.satisfies_P());
  CHECK(to_property_P(near).size() == 1);
  CHECK(to_property_P(AtomicDistribution(d, {})).empty());
}

TEST_CASE("property Pf adds the boundary shadows") {
  const auto d = disc();
  const AtomicDistribution t(d, {{{0.1, 0.0}, {0.3, 0.0}}});
  const auto pf = to_property_Pf(t);
  CHECK(pf.satisfies_Pf());
  CHECK(pf.size() == 2);
  CHECK(to_signed_atoms(pf).size() == 2);

  const auto with_boundary = from_signed_atoms({{{0.0, 0.0}, 1}}, d);
  CHECK(to_property_Pf(with_boundary).size() == 1);
  CHECK(to_property_Pf(AtomicDistribution(d, {})).empty());
}

TEST_CASE("pairing with test functions") {
  const auto d = disc();
  const AtomicDistribution t(d, {{{0.1, 0.0}, {0.3, 0.0}}, {{-0.2, 0.4}, {0.5, 0.5}}});
  CHECK(evaluate(t, [](Point2) { return 3.0; }) == 0.0);
  CHECK(evaluate(t, [](Point2 p) { return p.x; }) == doctest::Approx(0.1 - 0.3 - 0.2 - 0.5));
  const AtomicDistribution one(d, {{{0.1, 0.0}, {0.3, 0.0}}});
  CHECK(evaluate(one, [](Point2 p) { return p.x < 0.2 ? 1.0 : 0.0; }) == 1.0);
}

TEST_CASE("trivial upper bound") {
  const auto d = disc();
  CHECK(trivial_upper_bound(AtomicDistribution(d, {{{0.0, 0.0}, {0.2, 0.0}}}), 2.0) == doctest::Approx(0.4));
  CHECK(trivial_upper_bound(AtomicDistribution(d, {}), 2.0) == 0.0);
  CHECK_THROWS_AS(trivial_upper_bound(AtomicDistribution(d, {}), 0.0), ArgumentError);
  // Measured on the (P) form: the long pair is charged through the boundary.
  const AtomicDistribution far(d, {{{-0.9, 0.0}, {0.9, 0.0}}});
  CHECK(trivial_upper_bound(far, 1.0) == doctest::Approx(0.2 * std::cos(std::numbers::pi / 720)));
}

TEST_CASE("restriction to a punctured domain") {
  const auto d = disc();
  const AtomicDistribution t(d, {{{0.1, 0.0}, {0.3, 0.0}}});
  const Point2 x{0.1, 0.0};
  const auto r = restrict(t, std::span(&x, 1));
  const auto atoms = to_signed_atoms(r);
  REQUIRE(atoms.size() == 1);
  CHECK(atoms[0].location == Point2{0.3, 0.0});
  CHECK(atoms[0].multiplicity == -1);
  // The orphan pairs with the puncture, now the closest boundary point.
  REQUIRE(r.size() == 1);
  CHECK(r.pairs()[0].x == x);

  CHECK(to_signed_atoms(restrict(t, {})).size() == 2);
  const Point2 both[] = {{0.1, 0.0}, {0.3, 0.0}};
  CHECK(to_signed_atoms(restrict(t, both)).empty());

  const auto scaled = t.with_measure_scale(std::numbers::pi);
  CHECK(restrict(scaled, std::span(&x, 1)).measure_scale() == std::numbers::pi);
}
