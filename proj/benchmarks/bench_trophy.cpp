#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "trophy/benchmark.hpp"
#include "trophy/lsr1.hpp"
#include "trophy/precision.hpp"
#include "trophy/problems.hpp"
#include "trophy/solver.hpp"
#include "trophy/steihaug.hpp"

namespace {

std::vector<double> random_doubles(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<double> v(n);
  for (double& x : v) {
    x = u(rng);
  }
  return v;
}

Eigen::VectorXd gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    v(i) = d(rng);
  }
  return v;
}

void BM_RoundToBits(benchmark::State& state) {
  const int bits = static_cast<int>(state.range(0));
  const std::vector<double> xs = random_doubles(4096);
  for (auto _ : state) {
    for (double x : xs) {
      benchmark::DoNotOptimize(trophy::round_to_bits(x, bits));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(xs.size()));
}
BENCHMARK(BM_RoundToBits)->Arg(11)->Arg(24)->Arg(53);

void BM_Evaluate(benchmark::State& state) {
  const trophy::ProblemSpec p = trophy::find_problem("chained_rosenbrock50");
  const int bits = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(trophy::evaluate(p, p.initial_point, bits));
  }
}
BENCHMARK(BM_Evaluate)->Arg(24)->Arg(53);

void BM_LimitedMemoryHvp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  trophy::CurvaturePairBuffer b(n, 10);
  for (int i = 0; i < 10; ++i) {
    const Eigen::VectorXd s = gaussian(n, rng);
    b.update(s, 2.0 * s + 0.1 * gaussian(n, rng));
  }
  const Eigen::VectorXd v = gaussian(n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(b.hvp(v));
  }
}
BENCHMARK(BM_LimitedMemoryHvp)->Arg(50)->Arg(1000)->Arg(100000);

void BM_SteihaugCg(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  const Eigen::VectorXd d = gaussian(n, rng).cwiseAbs().array() + 0.1;
  const trophy::HessianOperator op = [&d](const Eigen::VectorXd& v) { return Eigen::VectorXd(d.cwiseProduct(v)); };
  const Eigen::VectorXd g = gaussian(n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trophy::steihaug_cg(g, op, 10.0, 1e-6, n));
  }
}
BENCHMARK(BM_SteihaugCg)->Arg(50)->Arg(1000);

void BM_Solve(benchmark::State& state, const char* problem, const char* preset) {
  const trophy::ProblemSpec p = trophy::find_problem(problem);
  const trophy::SolverDefinition solver = trophy::solver_preset(preset);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trophy::run_one(p, solver));
  }
}
BENCHMARK_CAPTURE(BM_Solve, rosenbrock2_double, "rosenbrock2", "tr-double");
BENCHMARK_CAPTURE(BM_Solve, rosenbrock2_single_double, "rosenbrock2", "trophy-sd");
BENCHMARK_CAPTURE(BM_Solve, wood4_half_single_double, "wood4", "trophy-hsd");

}  // namespace

BENCHMARK_MAIN();
