#include <cmath>

#include "doctest.h"
#include "stablecone/error.hpp"
#include "stablecone/fixtures.hpp"
#include "stablecone/rng.hpp"
#include "stablecone/terms.hpp"

using namespace stablecone;

namespace {

// Frozen values computed with networkx on this exact graph.
Graph oracle_graph() {
  const std::vector<Dyad> edges{{0, 1}, {0, 5}, {0, 6}, {1, 3}, {1, 9}, {2, 3}, {2, 9},
                                {3, 4}, {3, 5}, {3, 7}, {3, 9}, {4, 8}, {5, 7}, {8, 9}};
  AttributeTable t;
  t["color"] = Attribute{std::vector<std::string>{"R", "R", "R", "G", "B", "G", "B", "R", "G", "G"}};
  t["size"] = Attribute{std::vector<double>{0.99, 1.14, 2.42, -0.38, -1.54, -1.69, 2.84, -1.67, 1.57, 1.46}};
  return Graph(10, edges, t);
}

ModelSpec all_terms() {
  ModelSpec m;
  m.terms = {Edges{},           Nsp{0},          Nsp{1},
             Nsp{2},            Gwesp{0.75},     Gwesp{0.3},
             NodeMatch{"color"}, NodeMix{"color", "R", "G"}, NodeMix{"color", "B", "B"},
             NodeCov{"size"}};
  return m;
}

Graph random_attributed_graph(Rng& rng, int v, double density) {
  std::vector<Dyad> edges;
  for (std::size_t k = 0; k < n_dyads(v); ++k)
    if (rng.uniform01() < density) edges.push_back(dyad_from_index(k));
  std::vector<std::string> group;
  std::vector<double> x;
  for (int i = 0; i < v; ++i) {
    group.push_back(std::string(1, static_cast<char>('A' + rng.uniform_index(3))));
    x.push_back(rng.uniform01() * 4 - 2);
  }
  AttributeTable t;
  t["group"] = Attribute{group};
  t["x"] = Attribute{x};
  return Graph(v, edges, t);
}

}  // namespace

TEST_CASE("statistics match the frozen oracle") {
  const StatVector t = stats(oracle_graph(), all_terms());
  const std::vector<double> expected{14, 11, 15, 5, 8.527633447258985, 8.259181779318283, 4, 7, 0, 9.280000000000001};
  REQUIRE(t.size() == static_cast<Eigen::Index>(expected.size()));
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(t[static_cast<Eigen::Index>(k)] == doctest::Approx(expected[k]).epsilon(1e-12));
  }
}

TEST_CASE("term names") {
  CHECK(all_terms().term_names() ==
        std::vector<std::string>{"edges", "nsp0", "nsp1", "nsp2", "gwesp.fixed.0.75", "gwesp.fixed.0.3",
                                 "nodematch.color", "nodemix.color.R.G", "nodemix.color.B.B", "nodecov.size"});
}

TEST_CASE("star statistics and change scores") {
  const Graph star = fixture_star(7);
  const ModelSpec m = star_model();
  CHECK(stats(star, m) == Eigen::Vector2d(6, 0));
  CHECK(stats(toggle(star, Dyad{0, 3}), m) == Eigen::Vector2d(5, 6));
  CHECK(change_score(star, Dyad{2, 5}, m) == Eigen::Vector2d(1, 0));
  CHECK(change_score(star, Dyad{0, 4}, m) == Eigen::Vector2d(-1, 6));
  CHECK(stats(Graph(5), m) == Eigen::Vector2d(0, 10));
}

TEST_CASE("triangle gwesp is exactly 3") {
  const std::vector<Dyad> tri{{0, 1}, {0, 2}, {1, 2}};
  ModelSpec m;
  m.terms = {Gwesp{0.75}};
  CHECK(stats(Graph(3, tri), m)[0] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("gwesp weight") {
  CHECK(gwesp_weight(0.75, 0) == 0.0);
  CHECK(gwesp_weight(0.75, 1) == doctest::Approx(1.0));
  CHECK(gwesp_weight(0.75, 200) == doctest::Approx(std::exp(0.75)));
}

TEST_CASE("empty graph gives zeros") {
  Rng rng(3);
  const Graph g = random_attributed_graph(rng, 6, 0.0);
  ModelSpec m;
  m.terms = {Edges{}, Gwesp{0.5}, NodeMatch{"group"}, NodeMix{"group", "A", "B"}, NodeCov{"x"}};
  CHECK(stats(g, m).isZero());
}

TEST_CASE("model validation") {
  const Graph g = oracle_graph();
  ModelSpec m;
  m.terms = {NodeCov{"color"}};
  CHECK_THROWS_AS(stats(g, m), AttributeTypeError);
  m.terms = {NodeMatch{"height"}};
  CHECK_THROWS_AS(stats(g, m), ModelMismatchError);
  m.terms = {Nsp{9}};
  CHECK_THROWS_AS(stats(g, m), ValidationError);
  m.terms = {Gwesp{0.0}};
  CHECK_THROWS_AS(m.validate(), ValidationError);
  m.terms = {Edges{}};
  m.theta = Eigen::Vector2d(1, 2);
  CHECK_THROWS_AS(m.validate(), DimensionError);
  CHECK_THROWS_AS(ModelSpec{}.validate(), ValidationError);
}

TEST_CASE("nodemix change scores") {
  const Fixture fx = fixture_nodemix();
  CHECK(change_score(fx.graph, Dyad{0, 2}, fx.model) == Eigen::Vector2d(-1, -1));
  CHECK(change_score(fx.graph, Dyad{1, 3}, fx.model) == Eigen::Vector2d(1, 1));
  CHECK(change_score(fx.graph, Dyad{0, 1}, fx.model) == Eigen::Vector2d(1, 0));
}

TEST_CASE("incremental change scores equal full recomputation") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int v = 3 + static_cast<int>(rng.uniform_index(13));
    const Graph g = random_attributed_graph(rng, v, 0.1 + 0.5 * rng.uniform01());
    ModelSpec m;
    m.terms = {Edges{},
               Nsp{static_cast<int>(rng.uniform_index(static_cast<std::size_t>(v - 1)))},
               Gwesp{0.1 + 2 * rng.uniform01()},
               NodeMatch{"group"},
               NodeMix{"group", "A", rng.uniform01() < 0.5 ? "B" : "A"},
               NodeCov{"x"}};
    const Dyad d = dyad_from_index(rng.uniform_index(n_dyads(v)));
    const Graph h = toggle(g, d);
    const StatVector inc = change_score(g, d, m);
    const StatVector full = stats(h, m) - stats(g, m);
    CHECK((inc - full).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((inc + change_score(h, d, m)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("change_score_set") {
  Rng rng(99);
  const Graph g = random_attributed_graph(rng, 9, 0.4);
  ModelSpec m;
  m.terms = {Edges{}, Nsp{1}, Gwesp{0.75}, NodeMatch{"group"}, NodeCov{"x"}};
  CHECK(change_score_set(g, {}, m).isZero());
  CHECK(change_score_set(g, {Dyad{2, 5}}, m) == change_score(g, Dyad{2, 5}, m));
  for (int trial = 0; trial < 50; ++trial) {
    const Dyad a = dyad_from_index(rng.uniform_index(36));
    const Dyad b = dyad_from_index(rng.uniform_index(36));
    if (a == b) continue;
    const StatVector full = stats(apply_toggle_set(g, {a, b}), m) - stats(g, m);
    CHECK((change_score_set(g, {a, b}, m) - full).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("shared-partner bookkeeping") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_attributed_graph(rng, 12, 0.35);
    ModelSpec nsp;
    for (int d = 0; d <= 10; ++d) nsp.terms.emplace_back(Nsp{d});
    const double nulls = static_cast<double>(n_dyads(12) - g.n_edges());
    CHECK(stats(g, nsp).sum() == nulls);
  }
}

TEST_CASE("potential") {
  CHECK(potential(Eigen::Vector2d(-3, -1), Eigen::Vector2d(6, 0)) == -18);
  CHECK(potential(Eigen::Vector2d::Zero(), Eigen::Vector2d(6, 5)) == 0);
  CHECK_THROWS_AS(potential(Eigen::Vector3d(1, 2, 3), Eigen::Vector2d(6, 0)), DimensionError);
}

TEST_CASE("gwesp does not drop when closing a triangle") {
  // path 0-1-2: adding {0,2} gives each existing edge a shared partner
  const std::vector<Dyad> path{{0, 1}, {1, 2}};
  const Graph g(3, path);
  ModelSpec m;
  m.terms = {Gwesp{0.75}};
  CHECK(change_score(g, Dyad{0, 2}, m)[0] > 0);
}
