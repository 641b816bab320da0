#include <benchmark/benchmark.h>

#include "irlab/analysis.hpp"
#include "irlab/geometry.hpp"
#include "irlab/instances.hpp"
#include "irlab/mdp.hpp"
#include "irlab/rng.hpp"
#include "irlab/us_irl.hpp"

namespace {

using namespace irlab;

MdpR bench_mdp(int S, int A, int H, std::uint64_t seed) {
  SplitMix64 rng(seed);
  MdpR m;
  m.S = S;
  m.A = A;
  m.H = H;
  m.p.assign(static_cast<std::size_t>(H) * S * A * S, 0.0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        double total = 0.0;
        for (int sp = 0; sp < S; ++sp) total += (m.at(h, s, a, sp) = rng.uniform() + 0.05);
        for (int sp = 0; sp < S; ++sp) m.at(h, s, a, sp) /= total;
      }
  return m;
}

PolicyTable bench_policy(int S, int A, int H) {
  PolicyTable pi;
  pi.S = S;
  pi.A = A;
  pi.H = H;
  pi.pi.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s) pi.at(h, s, s % A) = 1.0;
  return pi;
}

void BM_ValueDP(benchmark::State& state) {
  const int S = static_cast<int>(state.range(0));
  MdpR m = bench_mdp(S, 4, 10, 1);
  PolicyTable pi = bench_policy(S, 4, 10);
  RewardTable r;
  r.S = S;
  r.A = 4;
  r.H = 10;
  r.r.assign(static_cast<std::size_t>(10) * S * 4, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(advantage(m, pi, r));
}
BENCHMARK(BM_ValueDP)->Arg(4)->Arg(16)->Arg(64);

void BM_PointToSetLP(benchmark::State& state) {
  const int S = static_cast<int>(state.range(0));
  MdpR m = bench_mdp(S, 3, 4, 2);
  PolicyTable pi = bench_policy(S, 3, 4);
  RewardPolytope p = build_polytope(m, pi, Restriction::none);
  std::vector<double> x(p.n, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(point_to_set_distance(x, p));
}
BENCHMARK(BM_PointToSetLP)->Arg(2)->Arg(4)->Arg(8);

void BM_VertexEnumeration(benchmark::State& state) {
  const int S = static_cast<int>(state.range(0));
  MdpR m = bench_mdp(S, 2, 2, 3);
  PolicyTable pi = bench_policy(S, 2, 2);
  RewardPolytope p = build_polytope(m, pi, Restriction::state_only);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_vertices(p));
}
BENCHMARK(BM_VertexEnumeration)->Arg(2)->Arg(3)->Arg(4);

void BM_ExactHausdorff(benchmark::State& state) {
  const int S = static_cast<int>(state.range(0));
  MdpR m = bench_mdp(S, 2, 2, 4);
  MdpR m2 = bench_mdp(S, 2, 2, 5);
  PolicyTable pi = bench_policy(S, 2, 2);
  RewardPolytope p = build_polytope(m, pi, Restriction::state_only);
  RewardPolytope q = build_polytope(m2, pi, Restriction::state_only);
  for (auto _ : state)
    benchmark::DoNotOptimize(hausdorff(p, q, HausdorffMethod::exact));
}
BENCHMARK(BM_ExactHausdorff)->Arg(2)->Arg(3)->Arg(4);

void BM_ConfidenceRound(benchmark::State& state) {
  const int S = static_cast<int>(state.range(0));
  MdpR m = bench_mdp(S, 3, 5, 6);
  PolicyTable pi = bench_policy(S, 3, 5);
  ConfidenceConfig cfg;
  cfg.epsilon = 1.2;
  cfg.delta = 0.1;
  for (auto _ : state) {
    GenerativeOracle oracle(m, pi, 7);
    benchmark::DoNotOptimize(run_us_irl(oracle, cfg));
  }
}
BENCHMARK(BM_ConfidenceRound)->Arg(3)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
