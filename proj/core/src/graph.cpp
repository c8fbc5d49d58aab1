#include "stablecone/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <string>

#include "stablecone/error.hpp"
#include "stablecone/format.hpp"

namespace stablecone {

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) return std::to_string(x);
  return std::string(buf, end);
}

Dyad make_dyad(int a, int b) {
  if (a < 0 || b < 0) {
    throw InvalidDyadError("dyad (" + std::to_string(a) + "," + std::to_string(b) +
                           ") has a negative vertex index");
  }
  if (a == b) {
    throw InvalidDyadError("dyad (" + std::to_string(a) + "," + std::to_string(b) +
                           ") is a self-pair");
  }
  return a < b ? Dyad{a, b} : Dyad{b, a};
}

Dyad dyad_from_index(std::size_t index) {
  // Largest j with j(j-1)/2 <= index.
  auto j = static_cast<std::size_t>(
      std::floor((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0));
  while (j * (j - 1) / 2 > index) --j;
  while ((j + 1) * j / 2 <= index) ++j;
  const std::size_t i = index - j * (j - 1) / 2;
  return Dyad{static_cast<int>(i), static_cast<int>(j)};
}

std::size_t Attribute::size() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, values);
}

const std::vector<double>& Attribute::numeric() const {
  if (const auto* v = std::get_if<std::vector<double>>(&values)) return *v;
  throw AttributeTypeError("attribute is categorical, numeric values requested");
}

const std::vector<std::string>& Attribute::categorical() const {
  if (const auto* v = std::get_if<std::vector<std::string>>(&values)) return *v;
  throw AttributeTypeError("attribute is numeric, categorical values requested");
}

std::string Attribute::label(std::size_t vertex) const {
  if (const auto* v = std::get_if<std::vector<std::string>>(&values)) return v->at(vertex);
  return format_number(std::get<std::vector<double>>(values).at(vertex));
}

Graph::Graph(int n_vertices)
    : n_(n_vertices), attributes_(std::make_shared<const AttributeTable>()) {
  if (n_vertices < 0) throw ValidationError("graph vertex count must be non-negative");
  adjacency_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
  neighbors_.resize(static_cast<std::size_t>(n_));
}

Graph::Graph(int n_vertices, std::span<const Dyad> edges, AttributeTable attributes)
    : Graph(n_vertices) {
  for (const auto& [name, column] : attributes) {
    if (column.size() != static_cast<std::size_t>(n_)) {
      throw ValidationError("attribute '" + name + "' has " + std::to_string(column.size()) +
                            " values, expected " + std::to_string(n_));
    }
  }
  attributes_ = std::make_shared<const AttributeTable>(std::move(attributes));
  for (const auto& e : edges) {
    const Dyad d = make_dyad(e.i, e.j);
    check_dyad(d);
    if (has_edge(d)) {
      throw ValidationError("duplicate edge {" + std::to_string(d.i) + "," +
                            std::to_string(d.j) + "}");
    }
    toggle_in_place(d);
  }
}

void Graph::check_dyad(const Dyad& d) const {
  if (d.i < 0 || d.i >= d.j || d.j >= n_) {
    throw InvalidDyadError("dyad (" + std::to_string(d.i) + "," + std::to_string(d.j) +
                           ") is not valid for a graph on " + std::to_string(n_) +
                           " vertices");
  }
}

bool Graph::has_edge(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_) {
    throw InvalidDyadError("vertex index out of range");
  }
  return adjacency_[cell(a, b)] != 0;
}

const std::vector<int>& Graph::neighbors(int v) const {
  if (v < 0 || v >= n_) throw InvalidDyadError("vertex index out of range");
  return neighbors_[static_cast<std::size_t>(v)];
}

std::size_t Graph::common_neighbors(int a, int b) const {
  const auto& na = neighbors(a);
  const auto& nb = neighbors(b);
  std::size_t count = 0;
  auto x = na.begin();
  auto y = nb.begin();
  while (x != na.end() && y != nb.end()) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      ++count;
      ++x;
      ++y;
    }
  }
  return count;
}

std::vector<Dyad> Graph::edges() const {
  std::vector<Dyad> out;
  out.reserve(n_edges_);
  for (int j = 1; j < n_; ++j) {
    for (int i = 0; i < j; ++i) {
      if (adjacency_[cell(i, j)] != 0) out.push_back(Dyad{i, j});
    }
  }
  return out;
}

const Attribute& Graph::attribute(const std::string& name) const {
  auto it = attributes_->find(name);
  if (it == attributes_->end()) {
    throw ModelMismatchError("graph has no attribute named '" + name + "'");
  }
  return it->second;
}

bool Graph::has_attribute(const std::string& name) const {
  return attributes_->contains(name);
}

void Graph::toggle_in_place(const Dyad& d) {
  check_dyad(d);
  auto& fwd = adjacency_[cell(d.i, d.j)];
  auto& bwd = adjacency_[cell(d.j, d.i)];
  auto& ni = neighbors_[static_cast<std::size_t>(d.i)];
  auto& nj = neighbors_[static_cast<std::size_t>(d.j)];
  if (fwd != 0) {
    fwd = bwd = 0;
    ni.erase(std::lower_bound(ni.begin(), ni.end(), d.j));
    nj.erase(std::lower_bound(nj.begin(), nj.end(), d.i));
    --n_edges_;
  } else {
    fwd = bwd = 1;
    ni.insert(std::lower_bound(ni.begin(), ni.end(), d.j), d.j);
    nj.insert(std::lower_bound(nj.begin(), nj.end(), d.i), d.i);
    ++n_edges_;
  }
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.n_ != b.n_ || a.n_edges_ != b.n_edges_ || a.adjacency_ != b.adjacency_) return false;
  return a.attributes_ == b.attributes_ || *a.attributes_ == *b.attributes_;
}

Graph toggle(const Graph& g, const Dyad& d) {
  Graph out = g;
  out.toggle_in_place(d);
  return out;
}

void check_toggle_set(const Graph& g, const ToggleSet& ts) {
  std::set<std::size_t> seen;
  for (const auto& d : ts) {
    g.check_dyad(d);
    if (!seen.insert(d.index()).second) {
      throw InvalidToggleSetError("toggle set repeats dyad (" + std::to_string(d.i) + "," +
                                  std::to_string(d.j) + ")");
    }
  }
}

Graph apply_toggle_set(const Graph& g, const ToggleSet& ts) {
  check_toggle_set(g, ts);
  Graph out = g;
  for (const auto& d : ts) out.toggle_in_place(d);
  return out;
}

std::size_t hamming_distance(const Graph& a, const Graph& b) {
  if (a.n_vertices() != b.n_vertices()) {
    throw DimensionError("Hamming distance needs equal vertex counts");
  }
  std::size_t diff = 0;
  for (int j = 1; j < a.n_vertices(); ++j) {
    for (int i = 0; i < j; ++i) {
      if (a.has_edge(i, j) != b.has_edge(i, j)) ++diff;
    }
  }
  return diff;
}

Graph AlternativeSet::materialize(std::size_t k) const {
  return apply_toggle_set(base, toggles.at(k));
}

AlternativeSet hamming_ball(const Graph& g, int d) {
  if (d <= 0) {
    throw EmptyRadiusError("Hamming radius must be at least 1 (the target is never its own "
                           "alternative)");
  }
  const std::size_t n = n_dyads(g.n_vertices());
  if (static_cast<std::size_t>(d) > n) {
    throw ValidationError("Hamming radius " + std::to_string(d) + " exceeds the " +
                          std::to_string(n) + " available dyads");
  }
  AlternativeSet out{g, d, {}};
  const auto k = static_cast<std::size_t>(d);
  std::vector<std::size_t> combo(k);
  for (std::size_t t = 0; t < k; ++t) combo[t] = t;
  while (true) {
    ToggleSet ts;
    ts.reserve(k);
    for (auto idx : combo) ts.push_back(dyad_from_index(idx));
    out.toggles.push_back(std::move(ts));
    // Advance to the next k-subset in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && combo[pos - 1] == n - k + (pos - 1)) --pos;
    if (pos == 0) break;
    ++combo[pos - 1];
    for (std::size_t t = pos; t < k; ++t) combo[t] = combo[t - 1] + 1;
  }
  return out;
}

AlternativeSet custom_alternatives(const Graph& g, std::vector<ToggleSet> toggles) {
  if (toggles.empty()) throw EmptyAlternativeSetError("alternative set is empty");
  std::set<std::vector<std::size_t>> seen;
  for (const auto& ts : toggles) {
    if (ts.empty()) {
      throw EmptyRadiusError("an empty toggle set reproduces the target graph");
    }
    check_toggle_set(g, ts);
    std::vector<std::size_t> key;
    for (const auto& d : ts) key.push_back(d.index());
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) {
      throw InvalidToggleSetError("alternative set lists the same toggle set twice");
    }
  }
  const int radius = static_cast<int>(toggles.front().size());
  return AlternativeSet{g, radius, std::move(toggles)};
}

std::uint64_t graph_hash(const Graph& g) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(g.n_vertices()));
  for (const auto& e : g.edges()) mix(e.index());
  return h;
}

}  // namespace stablecone
