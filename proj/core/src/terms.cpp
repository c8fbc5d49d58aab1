#include "stablecone/terms.hpp"

#include <cmath>
#include <string>

#include "stablecone/error.hpp"
#include "stablecone/format.hpp"

namespace stablecone {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool same_value(const Attribute& a, int u, int v) {
  const auto su = static_cast<std::size_t>(u);
  const auto sv = static_cast<std::size_t>(v);
  if (a.type() == AttributeType::Numeric) return a.numeric()[su] == a.numeric()[sv];
  return a.categorical()[su] == a.categorical()[sv];
}

bool in_group(const Attribute& a, int v, const std::string& group) {
  return a.label(static_cast<std::size_t>(v)) == group;
}

bool mixes(const NodeMix& t, const Attribute& a, int u, int v) {
  return (in_group(a, u, t.group_a) && in_group(a, v, t.group_b)) ||
         (in_group(a, u, t.group_b) && in_group(a, v, t.group_a));
}

// Common neighbors by scanning every vertex; deliberately not the
// sorted-list intersection used by the incremental path.
std::size_t count_common(const Graph& g, int a, int b) {
  std::size_t c = 0;
  for (int k = 0; k < g.n_vertices(); ++k) {
    if (k != a && k != b && g.has_edge(a, k) && g.has_edge(b, k)) ++c;
  }
  return c;
}

double full_stat(const Graph& g, const TermSpec& term) {
  const int n = g.n_vertices();
  return std::visit(
      overloaded{
          [&](const Edges&) { return static_cast<double>(g.n_edges()); },
          [&](const Nsp& t) {
            double total = 0;
            for (int j = 1; j < n; ++j)
              for (int i = 0; i < j; ++i)
                if (!g.has_edge(i, j) &&
                    count_common(g, i, j) == static_cast<std::size_t>(t.shared))
                  total += 1;
            return total;
          },
          [&](const Gwesp& t) {
            double total = 0;
            for (int j = 1; j < n; ++j)
              for (int i = 0; i < j; ++i)
                if (g.has_edge(i, j)) total += gwesp_weight(t.decay, count_common(g, i, j));
            return total;
          },
          [&](const NodeMatch& t) {
            const auto& a = g.attribute(t.attribute);
            double total = 0;
            for (const auto& e : g.edges())
              if (same_value(a, e.i, e.j)) total += 1;
            return total;
          },
          [&](const NodeMix& t) {
            const auto& a = g.attribute(t.attribute);
            double total = 0;
            for (const auto& e : g.edges())
              if (mixes(t, a, e.i, e.j)) total += 1;
            return total;
          },
          [&](const NodeCov& t) {
            const auto& x = g.attribute(t.attribute).numeric();
            double total = 0;
            for (const auto& e : g.edges())
              total += x[static_cast<std::size_t>(e.i)] + x[static_cast<std::size_t>(e.j)];
            return total;
          },
      },
      term);
}

// Change in NSP(shared) when toggling {i,j}; sign = +1 adds the edge.
double nsp_change(const Graph& g, const Dyad& d, int shared, int sign) {
  const auto target = static_cast<long>(shared);
  double delta = 0;
  // The dyad itself leaves (or joins) the null set; its own partner count
  // does not depend on its state.
  if (static_cast<long>(g.common_neighbors(d.i, d.j)) == target) delta -= sign;

  // Pairs (other, k) with k adjacent to `pivot` gain or lose pivot as a
  // common neighbor.
  auto sweep = [&](int pivot, int other) {
    for (int k : g.neighbors(pivot)) {
      if (k == other || g.has_edge(other, k)) continue;
      const auto before = static_cast<long>(g.common_neighbors(other, k));
      const long after = before + sign;
      delta += static_cast<double>(after == target) - static_cast<double>(before == target);
    }
  };
  sweep(d.i, d.j);
  sweep(d.j, d.i);
  return delta;
}

double gwesp_change(const Graph& g, const Dyad& d, double decay, int sign) {
  double delta = sign * gwesp_weight(decay, g.common_neighbors(d.i, d.j));
  const auto& ni = g.neighbors(d.i);
  const auto& nj = g.neighbors(d.j);
  auto x = ni.begin();
  auto y = nj.begin();
  while (x != ni.end() && y != nj.end()) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      const int k = *x;
      // Edges {i,k} and {j,k} gain or lose the toggled endpoint as a partner.
      for (int end : {d.i, d.j}) {
        const std::size_t before = g.common_neighbors(end, k);
        const std::size_t after = sign > 0 ? before + 1 : before - 1;
        delta += gwesp_weight(decay, after) - gwesp_weight(decay, before);
      }
      ++x;
      ++y;
    }
  }
  return delta;
}

double incremental_change(const Graph& g, const Dyad& d, const TermSpec& term, int sign) {
  return std::visit(
      overloaded{
          [&](const Edges&) { return static_cast<double>(sign); },
          [&](const Nsp& t) { return nsp_change(g, d, t.shared, sign); },
          [&](const Gwesp& t) { return gwesp_change(g, d, t.decay, sign); },
          [&](const NodeMatch& t) {
            return same_value(g.attribute(t.attribute), d.i, d.j) ? double(sign) : 0.0;
          },
          [&](const NodeMix& t) {
            return mixes(t, g.attribute(t.attribute), d.i, d.j) ? double(sign) : 0.0;
          },
          [&](const NodeCov& t) {
            const auto& x = g.attribute(t.attribute).numeric();
            return sign * (x[static_cast<std::size_t>(d.i)] + x[static_cast<std::size_t>(d.j)]);
          },
      },
      term);
}

}  // namespace

double gwesp_weight(double decay, std::size_t shared_partners) {
  if (shared_partners == 0) return 0.0;
  return std::exp(decay) *
         (1.0 - std::pow(1.0 - std::exp(-decay), static_cast<double>(shared_partners)));
}

std::string term_name(const TermSpec& term) {
  return std::visit(
      overloaded{
          [](const Edges&) { return std::string("edges"); },
          [](const Nsp& t) { return "nsp" + std::to_string(t.shared); },
          [](const Gwesp& t) { return "gwesp.fixed." + format_number(t.decay); },
          [](const NodeMatch& t) { return "nodematch." + t.attribute; },
          [](const NodeMix& t) {
            return "nodemix." + t.attribute + "." + t.group_a + "." + t.group_b;
          },
          [](const NodeCov& t) { return "nodecov." + t.attribute; },
      },
      term);
}

std::vector<std::string> ModelSpec::term_names() const {
  std::vector<std::string> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(term_name(t));
  return out;
}

void ModelSpec::validate() const {
  if (terms.empty()) throw ValidationError("model has no terms");
  if (has_theta() && static_cast<std::size_t>(theta.size()) != terms.size()) {
    throw DimensionError("model has " + std::to_string(terms.size()) + " terms but theta has " +
                         std::to_string(theta.size()) + " entries");
  }
  for (const auto& term : terms) {
    std::visit(overloaded{
                   [](const Edges&) {},
                   [](const Nsp& t) {
                     if (t.shared < 0) throw ValidationError("nsp shared-partner count must be >= 0");
                   },
                   [](const Gwesp& t) {
                     if (!(t.decay > 0) || !std::isfinite(t.decay))
                       throw ValidationError("gwesp decay must be a positive finite number");
                   },
                   [](const NodeMatch& t) {
                     if (t.attribute.empty()) throw ValidationError("nodematch needs an attribute");
                   },
                   [](const NodeMix& t) {
                     if (t.attribute.empty() || t.group_a.empty() || t.group_b.empty())
                       throw ValidationError("nodemix needs an attribute and two group labels");
                   },
                   [](const NodeCov& t) {
                     if (t.attribute.empty()) throw ValidationError("nodecov needs an attribute");
                   },
               },
               term);
  }
}

void ModelSpec::validate_against(const Graph& g) const {
  validate();
  const int n = g.n_vertices();
  for (const auto& term : terms) {
    std::visit(overloaded{
                   [](const Edges&) {},
                   [&](const Nsp& t) {
                     if (n >= 2 && t.shared > n - 2)
                       throw ValidationError("nsp(" + std::to_string(t.shared) +
                                             ") exceeds v-2 for a graph on " +
                                             std::to_string(n) + " vertices");
                   },
                   [](const Gwesp&) {},
                   [&](const NodeMatch& t) { (void)g.attribute(t.attribute); },
                   [&](const NodeMix& t) { (void)g.attribute(t.attribute); },
                   [&](const NodeCov& t) {
                     if (g.attribute(t.attribute).type() != AttributeType::Numeric)
                       throw AttributeTypeError("nodecov attribute '" + t.attribute +
                                                "' must be numeric");
                   },
               },
               term);
  }
}

StatVector stats(const Graph& g, const ModelSpec& m) {
  m.validate_against(g);
  StatVector out(static_cast<Eigen::Index>(m.size()));
  for (std::size_t k = 0; k < m.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = full_stat(g, m.terms[k]);
  }
  return out;
}

StatVector change_score(const Graph& g, const Dyad& d, const ModelSpec& m) {
  g.check_dyad(d);
  m.validate_against(g);
  return change_score_unchecked(g, d, m);
}

StatVector change_score_unchecked(const Graph& g, const Dyad& d, const ModelSpec& m) {
  const int sign = g.has_edge(d) ? -1 : 1;
  StatVector out(static_cast<Eigen::Index>(m.size()));
  for (std::size_t k = 0; k < m.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = incremental_change(g, d, m.terms[k], sign);
  }
  return out;
}

StatVector change_score_set(const Graph& g, const ToggleSet& ts, const ModelSpec& m) {
  check_toggle_set(g, ts);
  m.validate_against(g);
  StatVector total = StatVector::Zero(static_cast<Eigen::Index>(m.size()));
  Graph current = g;
  for (const auto& d : ts) {
    total += change_score_unchecked(current, d, m);
    current.toggle_in_place(d);
  }
  return total;
}

double potential(const Eigen::VectorXd& theta, const StatVector& t) {
  if (theta.size() != t.size()) {
    throw DimensionError("theta has " + std::to_string(theta.size()) +
                         " entries but the statistic vector has " + std::to_string(t.size()));
  }
  return theta.dot(t);
}

}  // namespace stablecone
