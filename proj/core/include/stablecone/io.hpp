#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stablecone/change_matrix.hpp"
#include "stablecone/cone.hpp"
#include "stablecone/dynamics.hpp"
#include "stablecone/graph.hpp"
#include "stablecone/terms.hpp"

namespace stablecone {

std::string read_text(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

// Graph JSON:
//   {"n": 4, "edges": [[0,2]], "attributes": {"group": {"type": "categorical",
//    "values": ["A","A","B","B"]}}}
// Unknown keys are rejected. Output is canonical: edges in dyad-index order,
// attributes by name.
Graph parse_graph_json(std::string_view text);
Graph read_graph_json(const std::filesystem::path& path);
std::string graph_to_json(const Graph& g);

/// One `i<TAB>j` pair per line; blank lines and lines starting with '#' are
/// skipped. n_vertices < 0 sizes the graph by the largest index seen, or by
/// the attribute table when one is given.
Graph read_edge_list(const std::filesystem::path& edges, bool one_based, int n_vertices = -1,
                     const std::optional<std::filesystem::path>& attributes_csv = std::nullopt);

/// Header row of attribute names, then one row per vertex. A column whose
/// every cell parses as a number is numeric; anything else is categorical.
AttributeTable parse_attribute_csv(std::string_view text);

// Model JSON:
//   {"terms": [{"kind": "edges"}, {"kind": "nsp", "d": 0},
//              {"kind": "gwesp", "decay": 0.75},
//              {"kind": "nodematch", "attribute": "office"},
//              {"kind": "nodemix", "attribute": "group", "groups": ["A","B"]},
//              {"kind": "nodecov", "attribute": "seniority"}],
//    "theta": [...]}
ModelSpec parse_model_json(std::string_view text);
ModelSpec read_model_json(const std::filesystem::path& path);
std::string model_to_json(const ModelSpec& m);

std::string cone_report_json(const StableCone& cone, const ChangeMatrix& m);

struct AlternativeVerdict {
  ToggleSet toggles;
  /// Edge status in the target; for a single toggle, whether it removes an edge.
  bool is_edge = false;
  double d = 0.0;
  bool stable = false;
};

struct StabilityReport {
  bool stable = false;
  std::size_t n_alternatives = 0;
  std::size_t n_unstable = 0;
  double unstable_fraction = 0.0;
  /// Sorted by d descending, ties in alternative order.
  std::vector<AlternativeVerdict> per_alternative;
  std::optional<ConeStatus> cone_status;
};

/// Signed distances of every alternative at theta. An alternative is stable
/// when M_i . theta < -tol |M_i|.
StabilityReport stability_report(const Graph& g, const ChangeMatrix& m, const Eigen::VectorXd& theta,
                                 double tol = Tolerances{}.membership);

std::string stability_report_json(const StabilityReport& report);

/// Logical change matrix: term columns plus a `dyads` column of `i-j` pairs
/// joined by ';'.
std::string matrix_csv(const ChangeMatrix& m);

/// One row per first-change run.
std::string first_change_csv(const std::vector<FirstChange>& runs);

/// Per-dyad census joined with distances and edge flags.
std::string census_csv(const Graph& g, const Census& census, const Eigen::VectorXd& distances);

struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  [[nodiscard]] double at(std::size_t k) const;
};

/// "min:max:count" per theta component, comma-separated. count 1 needs
/// min == max. Throws ParseError on malformed specs.
std::vector<GridAxis> parse_grid(std::string_view spec);

/// Cartesian product of the axes, last axis varying fastest.
std::vector<Eigen::VectorXd> grid_points(const std::vector<GridAxis>& axes);

struct PersistenceRow {
  Eigen::VectorXd theta;
  double fraction = 0.0;
};

std::string persistence_csv(const std::vector<std::string>& term_names,
                            const std::vector<PersistenceRow>& rows, std::uint64_t seed,
                            std::size_t chains, std::uint64_t steps);

}  // namespace stablecone
