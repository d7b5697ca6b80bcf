#include <benchmark/benchmark.h>

#include "flatconn/area.hpp"
#include "flatconn/dual.hpp"
#include "flatconn/flatnorm.hpp"
#include "flatconn/jacobian.hpp"
#include "flatconn/random.hpp"

using namespace flatconn;

namespace {

DomainPtr unit_disc() {
  static const DomainPtr d = std::make_shared<const Domain>(Domain::disc({0.0, 0.0}, 1.0, 720));
  return d;
}

AtomicDistribution random_pairs(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PolePair> pairs;
  for (std::size_t k = 0; k < n; ++k) pairs.push_back({sample_in_domain(*unit_disc(), rng), sample_in_domain(*unit_disc(), rng)});
  return AtomicDistribution(unit_disc(), pairs);
}

void BM_Matching(benchmark::State& state) {
  const auto t = random_pairs(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_matching(t, NormKind{2.0}).value);
}
BENCHMARK(BM_Matching)->RangeMultiplier(2)->Range(2, 64)->Unit(benchmark::kMicrosecond);

void BM_Bruteforce(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  SignedAtomList atoms;
  for (std::size_t k = 0; k < n; ++k) atoms.push_back({sample_in_domain(*unit_disc(), rng), k % 2 ? -1 : 1});
  const auto t = from_signed_atoms(atoms, unit_disc());
  for (auto _ : state) benchmark::DoNotOptimize(solve_bruteforce(t, NormKind{2.0}).value);
}
BENCHMARK(BM_Bruteforce)->DenseRange(2, 7)->Unit(benchmark::kMicrosecond);

void BM_Certificate(benchmark::State& state) {
  const auto t = random_pairs(static_cast<std::size_t>(state.range(0)), 3);
  const auto dec = solve_matching(t, NormKind{2.0});
  for (auto _ : state) {
    const auto cert = build_certificate(t, dec);
    benchmark::DoNotOptimize(verify_duality(cert, t, dec, 0, 1000).gap);
  }
}
BENCHMARK(BM_Certificate)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Windings(benchmark::State& state) {
  const auto d = std::make_shared<const Domain>(Domain::rectangle(-1.0, -1.0, 1.0, 1.0));
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = make_multi_vortex({{{0.1, 0.2}, 1}, {{-0.4, 0.3}, -2}, {{0.5, -0.5}, 1}});
  for (auto _ : state) benchmark::DoNotOptimize(winding_per_plaquette(sample(f, GridSpec{d->bbox(), n, n}, *d)).total);
}
BENCHMARK(BM_Windings)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_VortexArea(benchmark::State& state) {
  const auto f = make_multi_vortex({{{0.0, 0.0}, 1}});
  for (auto _ : state) benchmark::DoNotOptimize(dirichlet_area(f, *unit_disc()));
}
BENCHMARK(BM_VortexArea)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
