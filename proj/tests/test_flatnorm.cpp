#include <doctest.h>

#include <cmath>
#include <numbers>

#include "flatconn/errors.hpp"
#include "flatconn/flatnorm.hpp"
#include "flatconn/random.hpp"

using namespace flatconn;

namespace {

DomainPtr disc(double r = 1.0) { return std::make_shared<const Domain>(Domain::disc({0.0, 0.0}, r, 720)); }

}  // namespace

TEST_CASE("single dipole is cheapest as a segment") {
  const auto d = disc();
  const AtomicDistribution t(d, {{{0.1, 0.0}, {-0.1, 0.0}}});
  for (const auto& dec : {solve_bruteforce(t, NormKind{2.0}), solve_matching(t, NormKind{2.0})}) {
    CHECK(dec.value == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(dec.R.empty());
    REQUIRE(dec.S.size() == 1);
    CHECK(dec.S[0].a() == Point2{-0.1, 0.0});
    CHECK(dec.S[0].b() == Point2{0.1, 0.0});
  }
  // beta = 1 halves the segment cost.
  CHECK(solve_matching(t, NormKind{1.0}).value == doctest::Approx(0.2));
}

TEST_CASE("a central charge in the unit disc costs one") {
  const auto d = disc();
  const auto t = from_signed_atoms({{{0.0, 0.0}, 1}}, d);
  const auto dec = solve_matching(t, NormKind{2.0});
  CHECK(dec.value == 1.0);
  REQUIRE(dec.R.size() == 1);
  CHECK(dec.S.empty());
  CHECK(solve_bruteforce(t, NormKind{2.0}).value == 1.0);
}

TEST_CASE("zero distribution") {
  const AtomicDistribution t(disc(), {});
  for (const auto& dec : {solve_bruteforce(t, NormKind{2.0}), solve_matching(t, NormKind{2.0})}) {
    CHECK(dec.value == 0.0);
    CHECK(dec.R.empty());
    CHECK(dec.S.empty());
  }
}

TEST_CASE("vortex law on small discs") {
  for (const double r : {0.1, 0.3}) {
    const auto d = disc(r);
    const auto t = from_signed_atoms({{{0.0, 0.0}, 1}}, d);
    CHECK(solve_matching(t, NormKind{2.0}).value == doctest::Approx(2 * r).epsilon(1e-3));
  }
}

TEST_CASE("two far charges stay free") {
  const auto d = disc(3.0);
  const AtomicDistribution t(d, {{{0.65, 0.0}, {-0.65, 0.0}}});
  const auto dec = solve_matching(t, NormKind{2.0});
  CHECK(dec.value == doctest::Approx(2.0));
  CHECK(dec.R.size() == 2);
  CHECK(solve_bruteforce(t, NormKind{2.0}).value == doctest::Approx(2.0));
}

TEST_CASE("two short dipoles") {
  const auto d = disc();
  const auto t = from_signed_atoms(
      {{{0.2, 0.0}, 1}, {{0.3, 0.0}, -1}, {{-0.2, 0.1}, 1}, {{-0.2, -0.1}, -1}}, d);
  CHECK(solve_matching(t, NormKind{2.0}).value == doctest::Approx(0.6));
  CHECK(solve_bruteforce(t, NormKind{2.0}).value == doctest::Approx(0.6));
}

TEST_CASE("matching agrees with brute force around a hole") {
  const auto ring = std::make_shared<const Domain>(Domain::annulus({0.0, 0.0}, 1.0, 0.3, 180));
  Rng rng(2024);
  for (int i = 0; i < 60; ++i) {
    SignedAtomList atoms;
    const int n = static_cast<int>(rng.integer(1, 6));
    for (int k = 0; k < n; ++k) atoms.push_back({sample_in_domain(*ring, rng), rng.integer(0, 1) ? 1 : -1});
    const auto t = from_signed_atoms(atoms, ring);
    for (const double beta : {1.0, 2.0}) {
      const double m = solve_matching(t, NormKind{beta}).value;
      const double b = solve_bruteforce(t, NormKind{beta}).value;
      REQUIRE(m == doctest::Approx(b).epsilon(1e-12));
      REQUIRE(m <= trivial_upper_bound(t, beta) + 1e-12);
    }
  }
}

TEST_CASE("decomposition has the right boundary") {
  const auto d = std::make_shared<const Domain>(Domain::rectangle(0.0, 0.0, 1.0, 1.0));
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    std::vector<PolePair> pairs;
    for (int k = 0; k < 4; ++k) pairs.push_back({sample_in_domain(*d, rng), sample_in_domain(*d, rng)});
    const AtomicDistribution t(d, pairs);
    const auto dec = solve_matching(t, NormKind{2.0});
    // <R + dS, phi> = <T, phi> for a smooth phi vanishing on the boundary.
    auto phi = [](Point2 p) { return p.x * (1.0 - p.x) * p.y * (1.0 - p.y) * std::sin(3 * p.x + p.y); };
    double pairing = 0.0;
    for (const auto& a : dec.R) pairing += a.multiplicity * phi(a.location);
    for (const auto& s : dec.S) pairing += phi(s.b()) - phi(s.a());
    REQUIRE(pairing == doctest::Approx(evaluate(t, phi)).epsilon(1e-12));
    REQUIRE(dec.value == doctest::Approx(mass_R(dec.R, *d) + 2.0 * mass_S(dec.S, *d)).epsilon(1e-14));
  }
}

TEST_CASE("brute force guard") {
  const auto d = disc();
  SignedAtomList atoms;
  for (int k = 0; k < 9; ++k) atoms.push_back({{-0.8 + 0.2 * k, 0.3}, 1});
  CHECK_THROWS_AS(solve_bruteforce(from_signed_atoms(atoms, d), NormKind{2.0}), GuardError);
  CHECK_NOTHROW(solve_matching(from_signed_atoms(atoms, d), NormKind{2.0}));
  CHECK_THROWS_AS(NormKind{0.0}, ArgumentError);
}

TEST_CASE("structure of minimizers") {
  const auto d = disc();
  Rng rng(17);
  std::vector<PolePair> pairs;
  for (int k = 0; k < 6; ++k) pairs.push_back({sample_in_domain(*d, rng), sample_in_domain(*d, rng)});
  const AtomicDistribution t(d, pairs);
  const auto rep = verify_structure(solve_matching(t, NormKind{2.0}), t, *d);
  CHECK(rep.a == CheckStatus::pass);
  CHECK(rep.b == CheckStatus::pass);
  CHECK(rep.e == CheckStatus::pass);
  CHECK(rep.f == CheckStatus::pass);
  CHECK(rep.g == CheckStatus::pass);
  CHECK(rep.h == CheckStatus::pass);
  CHECK_FALSE(rep.hard_failure());

  const AtomicDistribution small(d, std::vector<PolePair>(pairs.begin(), pairs.begin() + 3));
  const auto brute = solve_bruteforce(small, NormKind{2.0});
  CHECK(verify_structure(brute, small, *d).h == CheckStatus::pass);

  // A dipole longer than one is never part of a minimizer.
  const auto big = disc(3.0);
  const AtomicDistribution long_pair(big, {{{0.6, 0.0}, {-0.6, 0.0}}});
  Decomposition bad;
  bad.S.emplace_back(Point2{-0.6, 0.0}, Point2{0.6, 0.0});
  bad.value = 2.4;
  const auto bad_rep = verify_structure(bad, long_pair, *big);
  CHECK(bad_rep.b == CheckStatus::fail);
  CHECK(bad_rep.hard_failure());

  const auto classical = verify_structure(solve_matching(t, NormKind{1.0}), t, *d);
  CHECK(classical.a == CheckStatus::not_applicable);
  CHECK(classical.h == CheckStatus::pass);
}
