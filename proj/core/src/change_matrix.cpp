#include "stablecone/change_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "stablecone/error.hpp"

namespace stablecone {
namespace {

// Rows that agree within `tol` almost always land in the same bucket; the
// bucket only narrows the candidates and equality is re-checked exactly.
std::size_t bucket_key(const Eigen::RowVectorXd& row) {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    const auto q = static_cast<long long>(std::llround(row[k] * 1e6));
    h ^= std::hash<long long>{}(q) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace

std::size_t ChangeMatrix::n_alternatives() const noexcept {
  std::size_t total = 0;
  for (const auto& p : provenance) total += p.size();
  return total;
}

std::vector<std::size_t> ChangeMatrix::row_of_alternative() const {
  std::size_t max_index = 0;
  for (const auto& p : provenance)
    for (auto a : p) max_index = std::max(max_index, a + 1);
  std::vector<std::size_t> out(std::max(max_index, alternatives.size()), n_rows());
  for (std::size_t r = 0; r < provenance.size(); ++r)
    for (auto a : provenance[r]) out[a] = r;
  return out;
}

Eigen::MatrixXd ChangeMatrix::expand() const {
  const auto owner = row_of_alternative();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(owner.size()), rows.cols());
  for (std::size_t a = 0; a < owner.size(); ++a) {
    if (owner[a] >= n_rows()) throw InternalError("alternative without a change-matrix row");
    out.row(static_cast<Eigen::Index>(a)) = rows.row(static_cast<Eigen::Index>(owner[a]));
  }
  return out;
}

ChangeMatrix dedup(const Eigen::MatrixXd& logical_rows, double tol) {
  ChangeMatrix out;
  out.dedup_tolerance = tol;
  std::vector<Eigen::Index> kept;
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
  for (Eigen::Index r = 0; r < logical_rows.rows(); ++r) {
    const Eigen::RowVectorXd row = logical_rows.row(r);
    auto& bucket = buckets[bucket_key(row)];
    bool merged = false;
    for (auto slot : bucket) {
      if ((logical_rows.row(kept[slot]) - row).cwiseAbs().maxCoeff() <= tol) {
        out.provenance[slot].push_back(static_cast<std::size_t>(r));
        merged = true;
        break;
      }
    }
    if (!merged) {
      bucket.push_back(kept.size());
      kept.push_back(r);
      out.provenance.push_back({static_cast<std::size_t>(r)});
    }
  }
  out.rows.resize(static_cast<Eigen::Index>(kept.size()), logical_rows.cols());
  for (std::size_t s = 0; s < kept.size(); ++s) {
    out.rows.row(static_cast<Eigen::Index>(s)) = logical_rows.row(kept[s]);
  }
  return out;
}

ChangeMatrix build_matrix(const Graph& g, const AlternativeSet& alternatives,
                          const ModelSpec& m, double tol) {
  if (alternatives.toggles.empty()) {
    throw EmptyAlternativeSetError("alternative set is empty");
  }
  if (!(alternatives.base == g)) {
    throw ValidationError("alternative set was built around a different target graph");
  }
  m.validate_against(g);
  const auto k = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd logical(static_cast<Eigen::Index>(alternatives.size()), k);
  for (std::size_t a = 0; a < alternatives.size(); ++a) {
    const auto& ts = alternatives.toggles[a];
    logical.row(static_cast<Eigen::Index>(a)) =
        ts.size() == 1 ? change_score(g, ts.front(), m) : change_score_set(g, ts, m);
  }
  ChangeMatrix out = dedup(logical, tol);
  out.term_names = m.term_names();
  out.alternatives = alternatives.toggles;
  out.target_hash = graph_hash(g);
  return out;
}

Conflicts detect_unstabilizable(const ChangeMatrix& m) {
  Conflicts out;
  const auto n = static_cast<Eigen::Index>(m.n_rows());
  std::vector<Eigen::VectorXd> unit(static_cast<std::size_t>(n));
  std::vector<bool> zero(static_cast<std::size_t>(n), false);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::VectorXd row = m.rows.row(r).transpose();
    if (row.cwiseAbs().maxCoeff() <= m.dedup_tolerance) {
      zero[static_cast<std::size_t>(r)] = true;
      out.zero_rows.push_back(static_cast<std::size_t>(r));
    } else {
      unit[static_cast<std::size_t>(r)] = row / row.norm();
    }
  }
  constexpr double kOppositeCosine = -1.0 + 1e-9;
  for (Eigen::Index a = 0; a < n; ++a) {
    if (zero[static_cast<std::size_t>(a)]) continue;
    for (Eigen::Index b = a + 1; b < n; ++b) {
      if (zero[static_cast<std::size_t>(b)]) continue;
      if (unit[static_cast<std::size_t>(a)].dot(unit[static_cast<std::size_t>(b)]) <=
          kOppositeCosine) {
        out.opposite_pairs.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
      }
    }
  }
  return out;
}

ChangeMatrix drop_rows(const ChangeMatrix& m, std::span<const std::size_t> rows_to_drop) {
  const std::set<std::size_t> drop(rows_to_drop.begin(), rows_to_drop.end());
  ChangeMatrix out = m;
  std::vector<Eigen::Index> keep;
  out.provenance.clear();
  if (!m.alternatives.empty()) out.alternatives.clear();
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    if (drop.contains(r)) continue;
    keep.push_back(static_cast<Eigen::Index>(r));
    out.provenance.push_back(m.provenance[r]);
  }
  // renumber the surviving alternatives, keeping their original order
  std::vector<std::size_t> survivors;
  for (const auto& p : out.provenance) survivors.insert(survivors.end(), p.begin(), p.end());
  std::sort(survivors.begin(), survivors.end());
  for (auto& p : out.provenance)
    for (auto& a : p)
      a = static_cast<std::size_t>(std::lower_bound(survivors.begin(), survivors.end(), a) - survivors.begin());
  if (!m.alternatives.empty())
    for (auto a : survivors) out.alternatives.push_back(m.alternatives[a]);
  out.rows.resize(static_cast<Eigen::Index>(keep.size()), m.rows.cols());
  for (std::size_t s = 0; s < keep.size(); ++s) {
    out.rows.row(static_cast<Eigen::Index>(s)) = m.rows.row(keep[s]);
  }
  return out;
}

}  // namespace stablecone
