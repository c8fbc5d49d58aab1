#pragma once

#include <filesystem>

#include "stablecone/graph.hpp"
#include "stablecone/terms.hpp"

namespace stablecone {

struct Fixture {
  Graph graph;
  ModelSpec model;
};

/// Center 0 joined to 1..v-1. Throws DomainError for v < 2.
Graph fixture_star(int v);

/// [edges, nsp(0)], with theta when given.
ModelSpec star_model(const Eigen::VectorXd& theta = {});

/// Four vertices labeled A, A, B, B with the single edge {0,2}, under
/// [edges, nodemix(group, A, B)].
Fixture fixture_nodemix();

/// Terms and published estimates for the 36-partner collaboration network:
/// edges, nodecov seniority and practice, nodematch practice, gender and
/// office, gwesp(0.75).
ModelSpec lazega_model();

enum class Symmetrize { Mutual, Either };

/// Loads the 36 partners from `dir`, which holds either
///   edges.tsv (0-based pairs) + attributes.csv with columns
///   seniority, practice, office, gender
/// or the original distribution files
///   ELwork36.dat or ELwork.dat (whitespace adjacency matrix) + ELattr.dat
///   (columns: seniority, status, gender, office, years, age, practice, school).
/// Directed adjacency matrices are symmetrized per `mode`.
Fixture fixture_lazega(const std::filesystem::path& dir, Symmetrize mode = Symmetrize::Mutual);

}  // namespace stablecone
