#include "doctest.h"
#include "stablecone/change_matrix.hpp"
#include "stablecone/error.hpp"
#include "stablecone/fixtures.hpp"
#include "stablecone/rng.hpp"

using namespace stablecone;

TEST_CASE("star matrix compresses to two rows") {
  const Graph star = fixture_star(7);
  const ChangeMatrix m = build_matrix(star, hamming_ball(star, 1), star_model());
  REQUIRE(m.n_rows() == 2);
  CHECK(m.n_alternatives() == 21);
  // dyad (0,1) comes first in canonical order
  CHECK(m.rows.row(0) == Eigen::RowVector2d(-1, 6));
  CHECK(m.rows.row(1) == Eigen::RowVector2d(1, 0));
  CHECK(m.provenance[0].size() == 6);
  CHECK(m.provenance[1].size() == 15);
  CHECK(m.term_names == std::vector<std::string>{"edges", "nsp0"});
  CHECK(m.target_hash == graph_hash(star));
}

TEST_CASE("dedup") {
  Eigen::MatrixXd rows(3, 2);
  rows << 1, 0, 1, 0, -1, 6;
  const ChangeMatrix m = dedup(rows);
  REQUIRE(m.n_rows() == 2);
  CHECK(m.provenance[0] == std::vector<std::size_t>{0, 1});
  CHECK(m.provenance[1] == std::vector<std::size_t>{2});

  Eigen::MatrixXd close(3, 2);
  close << 1, 0, 1 + 1e-12, 0, 1 + 1e-6, 0;
  CHECK(dedup(close).n_rows() == 2);

  Rng rng(1);
  Eigen::MatrixXd distinct(30, 3);
  for (Eigen::Index r = 0; r < 30; ++r)
    for (Eigen::Index c = 0; c < 3; ++c) distinct(r, c) = rng.uniform01();
  const ChangeMatrix same = dedup(distinct);
  CHECK(same.n_rows() == 30);
  CHECK(same.rows == distinct);
  CHECK(same.expand() == distinct);
}

TEST_CASE("sign patterns survive compression") {
  Rng rng(17);
  Eigen::MatrixXd logical(40, 3);
  for (Eigen::Index r = 0; r < 40; ++r)
    for (Eigen::Index c = 0; c < 3; ++c) logical(r, c) = static_cast<double>(rng.uniform_index(3)) - 1;
  const ChangeMatrix m = dedup(logical);
  CHECK(m.n_rows() < 40);
  const Eigen::MatrixXd expanded = m.expand();
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::Vector3d theta(rng.uniform01() - 0.5, rng.uniform01() - 0.5, rng.uniform01() - 0.5);
    const Eigen::VectorXd a = logical * theta;
    const Eigen::VectorXd b = expanded * theta;
    for (Eigen::Index r = 0; r < 40; ++r) CHECK((a[r] < 0) == (b[r] < 0));
  }
}

TEST_CASE("build_matrix rows are change scores") {
  Rng rng(4);
  std::vector<Dyad> edges;
  for (std::size_t k = 0; k < n_dyads(9); ++k)
    if (rng.uniform01() < 0.4) edges.push_back(dyad_from_index(k));
  const Graph g(9, edges);
  ModelSpec model;
  model.terms = {Edges{}, Nsp{1}, Gwesp{0.75}};
  const ChangeMatrix m = build_matrix(g, hamming_ball(g, 1), model);
  const auto owner = m.row_of_alternative();
  for (std::size_t a = 0; a < m.n_alternatives(); ++a) {
    const Dyad d = m.alternatives[a].front();
    CHECK((m.rows.row(static_cast<Eigen::Index>(owner[a])).transpose() - change_score(g, d, model)).isZero());
  }

  const auto single = custom_alternatives(g, {{Dyad{2, 4}}});
  const ChangeMatrix one = build_matrix(g, single, model);
  REQUIRE(one.n_rows() == 1);
  CHECK(one.rows.row(0).transpose() == change_score(g, Dyad{2, 4}, model));

  CHECK_THROWS_AS(build_matrix(toggle(g, Dyad{0, 1}), hamming_ball(g, 1), model), ValidationError);
}

TEST_CASE("radius 2 star matrix") {
  const Graph star = fixture_star(7);
  const ChangeMatrix m = build_matrix(star, hamming_ball(star, 2), star_model());
  CHECK(m.n_alternatives() == 210);
  CHECK(m.expand().rows() == 210);
  std::size_t total = 0;
  for (const auto& p : m.provenance) total += p.size();
  CHECK(total == 210);
}

TEST_CASE("unstabilizable configurations") {
  const Fixture fx = fixture_nodemix();
  const ChangeMatrix m = build_matrix(fx.graph, hamming_ball(fx.graph, 1), fx.model);
  const Conflicts c = detect_unstabilizable(m);
  CHECK(c.zero_rows.empty());
  REQUIRE(c.opposite_pairs.size() == 1);
  const auto [a, b] = c.opposite_pairs.front();
  CHECK(m.rows.row(static_cast<Eigen::Index>(a)) == -m.rows.row(static_cast<Eigen::Index>(b)));

  const Graph star = fixture_star(7);
  CHECK(detect_unstabilizable(build_matrix(star, hamming_ball(star, 1), star_model())).empty());

  Eigen::MatrixXd rows(4, 2);
  rows << 1, 2, 0, 0, -2, -4, 3, 1;
  const Conflicts scaled = detect_unstabilizable(dedup(rows));
  CHECK(scaled.zero_rows == std::vector<std::size_t>{1});
  REQUIRE(scaled.opposite_pairs.size() == 1);
  CHECK(scaled.opposite_pairs.front() == std::pair<std::size_t, std::size_t>{0, 2});
}

TEST_CASE("drop_rows keeps provenance consistent") {
  Eigen::MatrixXd rows(4, 2);
  rows << 1, 2, 0, 0, 1, 2, 3, 1;
  ChangeMatrix m = dedup(rows);
  m.alternatives = {{Dyad{0, 1}}, {Dyad{0, 2}}, {Dyad{1, 2}}, {Dyad{0, 3}}};
  const std::vector<std::size_t> drop{1};
  const ChangeMatrix kept = drop_rows(m, drop);
  CHECK(kept.n_rows() == 2);
  CHECK(kept.n_alternatives() == 3);
  for (const auto& p : kept.provenance)
    for (auto a : p) CHECK(a < kept.alternatives.size());
  CHECK(kept.expand().rows() == 3);
}
