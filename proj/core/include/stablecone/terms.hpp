#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "stablecone/graph.hpp"

namespace stablecone {

// Sufficient-statistic terms for undirected graphs.

/// Number of edges.
struct Edges {
  friend bool operator==(const Edges&, const Edges&) = default;
};

/// Null dyads whose endpoints have exactly `shared` common neighbors.
struct Nsp {
  int shared = 0;
  friend bool operator==(const Nsp&, const Nsp&) = default;
};

/// Geometrically weighted edgewise shared partners with a fixed decay:
///   e^a * sum_{k>=1} [1 - (1 - e^-a)^k] * EP_k
/// where EP_k counts edges whose endpoints share exactly k partners.
struct Gwesp {
  double decay = 0.75;
  friend bool operator==(const Gwesp&, const Gwesp&) = default;
};

/// Edges whose endpoints carry equal attribute values.
struct NodeMatch {
  std::string attribute;
  friend bool operator==(const NodeMatch&, const NodeMatch&) = default;
};

/// Edges joining a vertex labeled group_a to one labeled group_b
/// (both endpoints in group_a when the two labels coincide).
struct NodeMix {
  std::string attribute;
  std::string group_a;
  std::string group_b;
  friend bool operator==(const NodeMix&, const NodeMix&) = default;
};

/// Sum over edges {i,j} of x_i + x_j for a numeric attribute x.
struct NodeCov {
  std::string attribute;
  friend bool operator==(const NodeCov&, const NodeCov&) = default;
};

using TermSpec = std::variant<Edges, Nsp, Gwesp, NodeMatch, NodeMix, NodeCov>;

/// Column label: "edges", "nsp0", "gwesp.fixed.0.75", "nodematch.office",
/// "nodemix.group.A.B", "nodecov.seniority".
std::string term_name(const TermSpec& term);

using StatVector = Eigen::VectorXd;

/// Ordered terms plus coefficients. Term order fixes the column order of
/// every statistic vector and of the change matrix. `theta` may be empty
/// when only the geometry is needed.
struct ModelSpec {
  std::vector<TermSpec> terms;
  Eigen::VectorXd theta;

  [[nodiscard]] std::size_t size() const noexcept { return terms.size(); }
  [[nodiscard]] bool has_theta() const noexcept { return theta.size() > 0; }
  [[nodiscard]] std::vector<std::string> term_names() const;

  /// Term parameters are in range and theta (if present) has one entry per term.
  void validate() const;
  /// Every attribute reference resolves on g with the right type.
  void validate_against(const Graph& g) const;
};

/// Full statistic vector t(g), recomputed from scratch.
StatVector stats(const Graph& g, const ModelSpec& m);

/// t(toggle(g,d)) - t(g), computed from the neighborhoods of d's endpoints.
StatVector change_score(const Graph& g, const Dyad& d, const ModelSpec& m);

/// change_score without validating d or the model; for sampler inner loops.
StatVector change_score_unchecked(const Graph& g, const Dyad& d, const ModelSpec& m);

/// t(apply_toggle_set(g,ts)) - t(g) by chaining single-dyad change scores.
StatVector change_score_set(const Graph& g, const ToggleSet& ts, const ModelSpec& m);

/// theta . t. Throws DimensionError on length mismatch.
double potential(const Eigen::VectorXd& theta, const StatVector& t);

/// e^a [1 - (1 - e^-a)^k], the GWESP weight of an edge with k shared partners.
double gwesp_weight(double decay, std::size_t shared_partners);

}  // namespace stablecone
