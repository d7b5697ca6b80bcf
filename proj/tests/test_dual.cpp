#include <doctest.h>

#include <cmath>

#include "flatconn/dual.hpp"
#include "flatconn/errors.hpp"
#include "flatconn/random.hpp"

using namespace flatconn;

namespace {

DomainPtr disc(double r = 1.0) { return std::make_shared<const Domain>(Domain::disc({0.0, 0.0}, r, 720)); }

}  // namespace

TEST_CASE("certificate of a single dipole") {
  const auto d = disc();
  const AtomicDistribution t(d, {{{0.1, 0.0}, {-0.1, 0.0}}});
  const auto dec = solve_matching(t, NormKind{2.0});
  const auto cert = build_certificate(t, dec);
  CHECK(cert.converged);
  CHECK_FALSE(cert.failed);
  CHECK(evaluate_certificate(cert, {-0.1, 0.0}) == -1.0);
  CHECK(evaluate_certificate(cert, {0.1, 0.0}) == doctest::Approx(-0.6));
  CHECK(cert.gap <= 1e-12);
  const auto rep = verify_duality(cert, t, dec);
  CHECK(rep.passed());
  CHECK(rep.lipschitz_pairs == 10000);
}

TEST_CASE("certificate of the zero distribution") {
  const auto d = disc();
  const AtomicDistribution t(d, {});
  const auto dec = solve_matching(t, NormKind{2.0});
  const auto cert = build_certificate(t, dec);
  CHECK(cert.gap == 0.0);
  CHECK(evaluate_certificate(cert, {0.0, 0.0}) == -1.0);
  CHECK(verify_duality(cert, t, dec, 0, 100).passed());
}

TEST_CASE("free charge is a cone apex") {
  const auto d = disc(2.0);
  const auto t = from_signed_atoms({{{0.0, 0.0}, 1}}, d);
  const auto dec = solve_matching(t, NormKind{2.0});
  const auto cert = build_certificate(t, dec);
  CHECK(dec.value == 1.0);
  CHECK(evaluate_certificate(cert, {0.0, 0.0}) == 1.0);
  CHECK(evaluate_certificate(cert, {-1.2, 0.0}) == -1.0);
  CHECK(evaluate_certificate(cert, {2.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cert.gap <= 1e-12);
}

TEST_CASE("certificate vanishes on the boundary") {
  const auto d = disc();
  const AtomicDistribution t(d, {{{0.3, 0.2}, {-0.5, 0.1}}, {{0.9, 0.0}, {0.0, 0.85}}, {{-0.1, -0.1}, {0.2, -0.6}}});
  const auto dec = solve_matching(t, NormKind{2.0});
  const auto cert = build_certificate(t, dec);
  double worst = 0.0;
  for (const Point2 v : d->outer().vertices()) worst = std::max(worst, std::abs(evaluate_certificate(cert, v)));
  CHECK(worst <= 1e-6);
  CHECK(verify_duality(cert, t, dec, 4).passed());
}

TEST_CASE("strong duality on random instances") {
  const auto d = disc();
  Rng rng(99);
  for (int i = 0; i < 25; ++i) {
    std::vector<PolePair> pairs;
    const int m = static_cast<int>(rng.integer(1, 8));
    for (int k = 0; k < m; ++k) pairs.push_back({sample_in_domain(*d, rng), sample_in_domain(*d, rng)});
    const AtomicDistribution t(d, pairs);
    const auto dec = solve_matching(t, NormKind{2.0});
    const auto cert = build_certificate(t, dec);
    const auto rep = verify_duality(cert, t, dec, rng.bits(), 2000);
    REQUIRE(rep.passed());
    REQUIRE(cert.iterations_used <= static_cast<int>(cert.dipoles.size()) + 2);
  }
}

TEST_CASE("perturbed pole value is caught") {
  const auto d = disc();
  const AtomicDistribution t(d, {{{0.1, 0.0}, {-0.1, 0.0}}});
  const auto dec = solve_matching(t, NormKind{2.0});
  auto cert = build_certificate(t, dec);
  cert.pole_values[0] -= 0.1;
  const auto rep = verify_duality(cert, t, dec, 0, 100);
  CHECK(rep.gap == doctest::Approx(0.1));
  CHECK_FALSE(rep.gap_ok);
  CHECK_FALSE(rep.activity_ok);
  CHECK_FALSE(rep.passed());
}

TEST_CASE("only the flat,alpha norm has a certificate") {
  const auto d = disc();
  const AtomicDistribution t(d, {{{0.1, 0.0}, {-0.1, 0.0}}});
  CHECK_THROWS_AS(build_certificate(t, solve_matching(t, NormKind{1.0})), UnsupportedError);
}

TEST_CASE("grid sampling") {
  const auto d = disc();
  const AtomicDistribution t(d, {{{0.1, 0.0}, {-0.1, 0.0}}});
  const auto cert = build_certificate(t, solve_matching(t, NormKind{2.0}));
  const auto g = sample_on_grid(cert, 21, 21);
  REQUIRE(g.values.size() == 21 * 21);
  CHECK(std::isnan(g.values[0]));
  CHECK(g.values[10 * 21 + 10] == doctest::Approx(evaluate_certificate(cert, {0.0, 0.0})));
}
