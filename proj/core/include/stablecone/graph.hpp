#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace stablecone {

/// Unordered vertex pair {i, j} stored with i < j.
struct Dyad {
  int i = 0;
  int j = 1;

  /// Canonical linear index j(j-1)/2 + i; a bijection onto 0..v(v-1)/2-1.
  [[nodiscard]] constexpr std::size_t index() const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(j - 1) / 2 +
           static_cast<std::size_t>(i);
  }

  friend constexpr bool operator==(const Dyad&, const Dyad&) = default;
  friend constexpr auto operator<=>(const Dyad&, const Dyad&) = default;
};

/// Builds a canonical dyad from two distinct vertex indices in either order.
/// Throws InvalidDyadError for self-pairs or negative indices.
Dyad make_dyad(int a, int b);

/// Inverse of Dyad::index().
Dyad dyad_from_index(std::size_t index);

[[nodiscard]] constexpr std::size_t n_dyads(int n_vertices) noexcept {
  const auto v = static_cast<std::size_t>(n_vertices);
  return v < 2 ? 0 : v * (v - 1) / 2;
}

enum class AttributeType { Numeric, Categorical };

/// One per-vertex attribute column.
struct Attribute {
  std::variant<std::vector<double>, std::vector<std::string>> values;

  [[nodiscard]] AttributeType type() const noexcept {
    return values.index() == 0 ? AttributeType::Numeric
                               : AttributeType::Categorical;
  }
  [[nodiscard]] std::size_t size() const noexcept;
  [[nodiscard]] const std::vector<double>& numeric() const;
  [[nodiscard]] const std::vector<std::string>& categorical() const;
  /// Value rendered as a label. Numeric values use the shortest exact form
  /// ("1", "2.5") so they can be matched against group names.
  [[nodiscard]] std::string label(std::size_t vertex) const;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

using AttributeTable = std::map<std::string, Attribute>;

/// Labeled simple undirected graph with a nodal attribute table.
///
/// Edge membership is an O(1) lookup in a dense bit matrix; sorted
/// adjacency lists support neighbor intersections. The attribute table is
/// shared between copies, so toggling produces cheap copies.
class Graph {
 public:
  explicit Graph(int n_vertices = 0);
  Graph(int n_vertices, std::span<const Dyad> edges, AttributeTable attributes = {});

  [[nodiscard]] int n_vertices() const noexcept { return n_; }
  [[nodiscard]] std::size_t n_edges() const noexcept { return n_edges_; }

  [[nodiscard]] bool has_edge(int a, int b) const;
  [[nodiscard]] bool has_edge(const Dyad& d) const { return has_edge(d.i, d.j); }

  /// Sorted neighbor list.
  [[nodiscard]] const std::vector<int>& neighbors(int v) const;
  [[nodiscard]] std::size_t degree(int v) const { return neighbors(v).size(); }
  [[nodiscard]] std::size_t common_neighbors(int a, int b) const;

  /// Edges in canonical-index order.
  [[nodiscard]] std::vector<Dyad> edges() const;

  [[nodiscard]] const AttributeTable& attributes() const noexcept { return *attributes_; }
  [[nodiscard]] const Attribute& attribute(const std::string& name) const;
  [[nodiscard]] bool has_attribute(const std::string& name) const;

  /// Throws InvalidDyadError unless 0 <= d.i < d.j < n_vertices.
  void check_dyad(const Dyad& d) const;

  /// Flips {i,j} between edge and null. Used by Markov chains that own
  /// their state; everything else goes through the free toggle().
  void toggle_in_place(const Dyad& d);

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  [[nodiscard]] std::size_t cell(int a, int b) const noexcept {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(b);
  }

  int n_ = 0;
  std::size_t n_edges_ = 0;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::vector<int>> neighbors_;
  std::shared_ptr<const AttributeTable> attributes_;
};

/// Copy of g with dyad d flipped.
Graph toggle(const Graph& g, const Dyad& d);

using ToggleSet = std::vector<Dyad>;

/// Throws InvalidToggleSetError on duplicate dyads, InvalidDyadError on
/// out-of-range ones.
void check_toggle_set(const Graph& g, const ToggleSet& ts);

/// Sequential toggle of every dyad in ts; order-independent since the dyads
/// are distinct.
Graph apply_toggle_set(const Graph& g, const ToggleSet& ts);

/// Size of the edge-set symmetric difference. Vertex counts must agree.
std::size_t hamming_distance(const Graph& a, const Graph& b);

/// Alternatives at Hamming distance exactly `radius` from `base`, stored as
/// toggle sets and materialized on demand.
struct AlternativeSet {
  Graph base;
  int radius = 1;
  std::vector<ToggleSet> toggles;

  [[nodiscard]] std::size_t size() const noexcept { return toggles.size(); }
  [[nodiscard]] Graph materialize(std::size_t k) const;
};

/// All size-d subsets of dyads, lexicographic in canonical dyad index.
AlternativeSet hamming_ball(const Graph& g, int d);

/// An alternative set with an explicit toggle list (radius = size of the
/// first toggle set). Validates every toggle set and rejects repeats.
AlternativeSet custom_alternatives(const Graph& g, std::vector<ToggleSet> toggles);

/// 64-bit FNV-1a over the vertex count and canonical edge list.
std::uint64_t graph_hash(const Graph& g);

}  // namespace stablecone
