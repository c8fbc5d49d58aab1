#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stablecone/graph.hpp"
#include "stablecone/terms.hpp"

namespace stablecone {

inline constexpr double kDedupTolerance = 1e-9;

/// Change scores of the target against every alternative, with identical
/// rows merged. Row i of `rows` is shared by the alternatives listed in
/// provenance[i]; rows stay in raw change-score units.
struct ChangeMatrix {
  Eigen::MatrixXd rows;
  std::vector<std::vector<std::size_t>> provenance;
  std::vector<std::string> term_names;
  /// Toggle sets of the alternatives, indexed like provenance entries.
  std::vector<ToggleSet> alternatives;
  std::uint64_t target_hash = 0;
  double dedup_tolerance = kDedupTolerance;

  [[nodiscard]] std::size_t n_rows() const noexcept { return static_cast<std::size_t>(rows.rows()); }
  [[nodiscard]] std::size_t n_terms() const noexcept { return static_cast<std::size_t>(rows.cols()); }
  [[nodiscard]] std::size_t n_alternatives() const noexcept;
  /// Inverse of provenance: the retained row index of every alternative.
  [[nodiscard]] std::vector<std::size_t> row_of_alternative() const;
  /// Logical (alternative-ordered) matrix, one row per alternative.
  [[nodiscard]] Eigen::MatrixXd expand() const;
};

/// Keeps the first representative of each class of rows equal within `tol`
/// per component, preserving first-occurrence order. Provenance entries are
/// the input row positions.
ChangeMatrix dedup(const Eigen::MatrixXd& logical_rows, double tol = kDedupTolerance);

/// One logical row Delta(G, G'_i) per alternative, then deduplicated.
/// Throws EmptyAlternativeSetError for an empty set and ValidationError if
/// S was not built around g.
ChangeMatrix build_matrix(const Graph& g, const AlternativeSet& alternatives,
                          const ModelSpec& m, double tol = kDedupTolerance);

/// Configurations that no parameter vector can stabilize.
struct Conflicts {
  /// Rows equal to zero: the alternative is equiprobable for every theta.
  std::vector<std::size_t> zero_rows;
  /// Row pairs (r, r') with r' = -c r, c > 0: opposite open half-spaces.
  std::vector<std::pair<std::size_t, std::size_t>> opposite_pairs;

  [[nodiscard]] bool empty() const noexcept { return zero_rows.empty() && opposite_pairs.empty(); }
};

Conflicts detect_unstabilizable(const ChangeMatrix& m);

/// Copy of m without the listed rows (their alternatives are dropped too, so
/// provenance indices still point into `alternatives`).
ChangeMatrix drop_rows(const ChangeMatrix& m, std::span<const std::size_t> rows_to_drop);

}  // namespace stablecone
