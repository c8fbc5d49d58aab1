#include <benchmark/benchmark.h>

#include "stablecone/change_matrix.hpp"
#include "stablecone/cone.hpp"
#include "stablecone/dynamics.hpp"
#include "stablecone/fixtures.hpp"
#include "stablecone/terms.hpp"

using namespace stablecone;

namespace {

Graph random_graph(int v, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Dyad> edges;
  for (std::size_t k = 0; k < n_dyads(v); ++k)
    if (rng.uniform01() < p) edges.push_back(dyad_from_index(k));
  return Graph(v, edges);
}

ModelSpec structural_model() {
  ModelSpec m;
  m.terms = {Edges{}, Nsp{1}, Gwesp{0.75}};
  m.theta = Eigen::Vector3d(-2.0, -0.1, 0.5);
  return m;
}

Eigen::MatrixXd planted_rows(Eigen::Index rows, Eigen::Index k, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd hidden(k);
  for (Eigen::Index c = 0; c < k; ++c) hidden[c] = rng.uniform01() * 2 - 1;
  Eigen::MatrixXd m(rows, k);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) m(r, c) = static_cast<double>(rng.uniform_index(11)) - 5;
    if (m.row(r).dot(hidden) > 0) m.row(r) *= -1;
  }
  return m;
}

}  // namespace

static void BM_ChangeScore(benchmark::State& state) {
  const int v = static_cast<int>(state.range(0));
  const Graph g = random_graph(v, 0.15, 1);
  const ModelSpec m = structural_model();
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(change_score_unchecked(g, dyad_from_index(k), m));
    k = (k + 1) % n_dyads(v);
  }
}
BENCHMARK(BM_ChangeScore)->Arg(36)->Arg(100)->Arg(400);

static void BM_FullStats(benchmark::State& state) {
  const Graph g = random_graph(static_cast<int>(state.range(0)), 0.15, 1);
  const ModelSpec m = structural_model();
  for (auto _ : state) benchmark::DoNotOptimize(stats(g, m));
}
BENCHMARK(BM_FullStats)->Arg(36)->Arg(100);

static void BM_BuildMatrix(benchmark::State& state) {
  const Graph g = random_graph(static_cast<int>(state.range(0)), 0.15, 2);
  const ModelSpec m = structural_model();
  const AlternativeSet alts = hamming_ball(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_matrix(g, alts, m));
}
BENCHMARK(BM_BuildMatrix)->Arg(36)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Solve(benchmark::State& state) {
  const ChangeMatrix m = dedup(planted_rows(state.range(0), state.range(1), 3));
  for (auto _ : state) benchmark::DoNotOptimize(solve(m));
}
BENCHMARK(BM_Solve)->Args({50, 3})->Args({200, 4})->Args({200, 5})->Unit(benchmark::kMillisecond);

static void BM_MetropolisStep(benchmark::State& state) {
  Graph g = random_graph(static_cast<int>(state.range(0)), 0.15, 4);
  ModelSpec m = structural_model();
  m.theta = Eigen::Vector3d(-8.0, -0.1, 0.2);
  Rng rng(5);
  Dyad proposed;
  for (auto _ : state) benchmark::DoNotOptimize(metropolis_step_in_place(g, m, rng, proposed));
}
BENCHMARK(BM_MetropolisStep)->Arg(7)->Arg(36)->Arg(100);

static void BM_StarPersistence(benchmark::State& state) {
  const Graph star = fixture_star(7);
  const ModelSpec m = star_model(Eigen::Vector2d(-8, -3));
  for (auto _ : state) benchmark::DoNotOptimize(persistence_experiment(star, m, 8, 10000, 1, 1));
}
BENCHMARK(BM_StarPersistence)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
