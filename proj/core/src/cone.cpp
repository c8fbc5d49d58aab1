#include "stablecone/cone.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include "stablecone/error.hpp"
#include "stablecone/rng.hpp"

namespace stablecone {
namespace {

// Calls f(subset) for every k-subset of `items`, lexicographic in position.
void for_each_subset(std::span<const std::size_t> items, std::size_t k,
                     const std::function<void(std::span<const std::size_t>)>& f) {
  const std::size_t n = items.size();
  if (k > n) return;
  std::vector<std::size_t> pos(k);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::vector<std::size_t> subset(k);
  while (true) {
    for (std::size_t t = 0; t < k; ++t) subset[t] = items[pos[t]];
    f(subset);
    std::size_t t = k;
    while (t > 0 && pos[t - 1] == n - k + (t - 1)) --t;
    if (t == 0) return;
    ++pos[t - 1];
    for (std::size_t s = t; s < k; ++s) pos[s] = pos[s - 1] + 1;
  }
}

bool contains_index(std::span<const std::size_t> items, std::size_t x) {
  return std::find(items.begin(), items.end(), x) != items.end();
}

// Unit-normal view of M shared by the initializer and the refinement.
class Geometry {
 public:
  Geometry(const ChangeMatrix& m, const Tolerances& tol)
      : unit_(normalize_rows(m.rows)), k_(m.rows.cols()), tol_(tol) {}

  [[nodiscard]] Eigen::Index dim() const noexcept { return k_; }
  [[nodiscard]] const Tolerances& tol() const noexcept { return tol_; }

  [[nodiscard]] double side(std::size_t row, const Eigen::VectorXd& ray) const {
    return unit_.row(static_cast<Eigen::Index>(row)).dot(ray);
  }

  [[nodiscard]] double cosine(std::size_t a, std::size_t b) const {
    return unit_.row(static_cast<Eigen::Index>(a)).dot(unit_.row(static_cast<Eigen::Index>(b)));
  }

  /// Same open halfspace as some row already in `rows`.
  [[nodiscard]] bool duplicates_direction(std::size_t row, std::span<const std::size_t> rows) const {
    for (auto r : rows) {
      if (cosine(row, r) >= 1.0 - tol_.parallel) return true;
    }
    return false;
  }

  [[nodiscard]] bool parallel_to_any(std::size_t row, std::span<const std::size_t> rows) const {
    for (auto r : rows) {
      if (std::abs(cosine(row, r)) >= 1.0 - tol_.parallel) return true;
    }
    return false;
  }

  [[nodiscard]] Eigen::MatrixXd stack(std::span<const std::size_t> rows) const {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), k_);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      a.row(static_cast<Eigen::Index>(t)) = unit_.row(static_cast<Eigen::Index>(rows[t]));
    }
    return a;
  }

  [[nodiscard]] Eigen::Index rank(std::span<const std::size_t> rows) const {
    return numerical_rank(stack(rows), tol_.rank);
  }

  [[nodiscard]] std::vector<std::size_t> incidence(const Eigen::VectorXd& ray,
                                                   std::span<const std::size_t> rows) const {
    std::vector<std::size_t> out;
    for (auto r : rows) {
      if (std::abs(side(r, ray)) <= tol_.incidence) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  [[nodiscard]] std::optional<Ray> ray_through(std::span<const std::size_t> hyperplanes,
                                               std::span<const std::size_t> retained) const {
    if (static_cast<Eigen::Index>(hyperplanes.size()) != k_ - 1) return std::nullopt;
    auto line = null_direction(stack(hyperplanes), tol_.rank);
    if (!line) return std::nullopt;
    Eigen::VectorXd x = *line;
    double sign = 0.0;
    for (auto r : retained) {
      if (contains_index(hyperplanes, r)) continue;
      const double s = side(r, x);
      if (std::abs(s) > tol_.incidence) {
        sign = s < 0 ? 1.0 : -1.0;
        break;
      }
    }
    if (sign == 0.0) return std::nullopt;
    x *= sign;
    for (auto r : retained) {
      if (side(r, x) > tol_.incidence) return std::nullopt;
    }
    return Ray{x, incidence(x, retained)};
  }

 private:
  Eigen::MatrixXd unit_;
  Eigen::Index k_;
  Tolerances tol_;
};

void merge_ray(std::vector<Ray>& rays, Ray ray, double match) {
  for (auto& existing : rays) {
    if ((existing.direction - ray.direction).cwiseAbs().maxCoeff() <= match) {
      std::vector<std::size_t> merged;
      std::set_union(existing.incidence.begin(), existing.incidence.end(), ray.incidence.begin(),
                     ray.incidence.end(), std::back_inserter(merged));
      existing.incidence = std::move(merged);
      return;
    }
  }
  rays.push_back(std::move(ray));
}

std::vector<Ray> exhaustive_rays(const Geometry& geo, std::span<const std::size_t> rows) {
  std::vector<Ray> rays;
  const auto k = static_cast<std::size_t>(geo.dim());
  for_each_subset(rows, k - 1, [&](std::span<const std::size_t> subset) {
    if (auto ray = geo.ray_through(subset, rows)) merge_ray(rays, std::move(*ray), geo.tol().ray_match);
  });
  return rays;
}

// A halfspace supports a facet iff the rays on its hyperplane span K-1 dims.
bool supports_facet(const Geometry& geo, std::size_t row, const std::vector<Ray>& rays) {
  const auto k = geo.dim();
  std::vector<const Eigen::VectorXd*> on;
  for (const auto& r : rays) {
    if (std::binary_search(r.incidence.begin(), r.incidence.end(), row)) on.push_back(&r.direction);
  }
  if (static_cast<Eigen::Index>(on.size()) < k - 1) return false;
  if (k == 1) return true;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(on.size()), k);
  for (std::size_t t = 0; t < on.size(); ++t) a.row(static_cast<Eigen::Index>(t)) = on[t]->transpose();
  return numerical_rank(a, geo.tol().rank) == k - 1;
}

// Drops halfspaces in `candidates` that no longer support a facet, and
// removes them from every ray's incidence set.
void prune_halfspaces(const Geometry& geo, std::vector<std::size_t>& rows, std::vector<Ray>& rays,
                      std::span<const std::size_t> candidates) {
  std::vector<std::size_t> dropped;
  for (auto row : candidates) {
    if (!contains_index(rows, row)) continue;
    if (!supports_facet(geo, row, rays)) dropped.push_back(row);
  }
  if (dropped.empty()) return;
  std::erase_if(rows, [&](std::size_t r) { return contains_index(dropped, r); });
  for (auto& ray : rays) {
    std::erase_if(ray.incidence, [&](std::size_t r) { return contains_index(dropped, r); });
  }
}

std::vector<std::size_t> source_rows(std::span<const Halfspace> hrep) {
  std::vector<std::size_t> out;
  out.reserve(hrep.size());
  for (const auto& h : hrep) out.push_back(h.source_row);
  return out;
}

std::vector<Halfspace> make_halfspaces(const ChangeMatrix& m, std::span<const std::size_t> rows) {
  std::vector<Halfspace> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(Halfspace{m.rows.row(static_cast<Eigen::Index>(r)).transpose(), r});
  return out;
}

}  // namespace

std::string to_string(ConeStatus status) {
  switch (status) {
    case ConeStatus::NonEmpty: return "NonEmpty";
    case ConeStatus::Empty: return "Empty";
    case ConeStatus::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

std::string to_string(EmptyCertificate::Kind kind) {
  switch (kind) {
    case EmptyCertificate::Kind::ZeroRow: return "zero-row";
    case EmptyCertificate::Kind::OppositePair: return "opposite-pair";
    case EmptyCertificate::Kind::Infeasible: return "infeasible";
  }
  return "unknown";
}

std::optional<Ray> intersect_to_ray(const ChangeMatrix& m, std::span<const std::size_t> hyperplanes,
                                    std::span<const std::size_t> retained, const Tolerances& tol) {
  for (auto r : hyperplanes)
    if (r >= m.n_rows()) throw ValidationError("hyperplane index out of range");
  for (auto r : retained)
    if (r >= m.n_rows()) throw ValidationError("halfspace index out of range");
  return Geometry(m, tol).ray_through(hyperplanes, retained);
}

bool closure_test(std::span<const Ray> vrep, std::span<const Halfspace> hrep, const Tolerances& tol) {
  if (vrep.empty()) return false;
  const Eigen::Index k = vrep.front().direction.size();
  if (static_cast<Eigen::Index>(vrep.size()) < k) return false;
  if (k == 1) return true;
  if (k == 2) {
    return vrep.size() == 2 &&
           vrep[0].direction.dot(vrep[1].direction) > -1.0 + tol.parallel;
  }

  Eigen::MatrixXd points(static_cast<Eigen::Index>(vrep.size()), k);
  for (std::size_t t = 0; t < vrep.size(); ++t) points.row(static_cast<Eigen::Index>(t)) = vrep[t].direction.transpose();
  if (numerical_rank(points, tol.rank) < k) return false;

  // Facets of the conic hull of the rays: hyperplanes through K-1
  // independent rays with every ray on one side. The origin is a vertex of
  // the hull, so an open set of rays shows up as an extra facet here.
  std::vector<Eigen::VectorXd> facets;
  std::vector<std::size_t> ids(vrep.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  for_each_subset(ids, static_cast<std::size_t>(k - 1), [&](std::span<const std::size_t> subset) {
    Eigen::MatrixXd a(k - 1, k);
    for (std::size_t t = 0; t < subset.size(); ++t) a.row(static_cast<Eigen::Index>(t)) = points.row(static_cast<Eigen::Index>(subset[t]));
    auto normal = null_direction(a, tol.rank);
    if (!normal) return;
    const Eigen::VectorXd s = points * *normal;
    if (s.maxCoeff() <= tol.incidence) {
      // already oriented outward
    } else if (s.minCoeff() >= -tol.incidence) {
      *normal = -*normal;
    } else {
      return;
    }
    for (const auto& f : facets) {
      if ((f - *normal).cwiseAbs().maxCoeff() <= tol.ray_match) return;
    }
    facets.push_back(*normal);
  });
  return facets.size() == hrep.size();
}

DoubleDescription initial_superset(const ChangeMatrix& m, std::uint64_t seed, const Tolerances& tol) {
  const std::size_t n_rows = m.n_rows();
  const Eigen::Index k = m.rows.cols();
  if (n_rows == 0) throw EmptyAlternativeSetError("change matrix has no rows");
  if (!feasible(m).feasible) {
    throw PreconditionError("initial superset needs a nonempty stable cone");
  }
  Geometry geo(m, tol);

  DoubleDescription dd;
  std::vector<std::size_t> order(n_rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  // K-1 pairwise non-parallel, independent starting rows.
  std::vector<std::size_t> rows;
  std::vector<bool> used(n_rows, false);
  for (auto idx : order) {
    if (static_cast<Eigen::Index>(rows.size()) == k - 1) break;
    if (geo.parallel_to_any(idx, rows)) continue;
    std::vector<std::size_t> trial = rows;
    trial.push_back(idx);
    if (geo.rank(trial) < static_cast<Eigen::Index>(trial.size())) continue;
    rows = std::move(trial);
    used[idx] = true;
  }
  dd.order = rows;
  for (auto idx : order)
    if (!used[idx]) dd.order.push_back(idx);
  dd.consumed = rows.size();

  std::vector<Ray> rays = exhaustive_rays(geo, rows);
  bool pointed = false;
  while (dd.consumed < dd.order.size()) {
    const std::size_t idx = dd.order[dd.consumed++];
    if (geo.duplicates_direction(idx, rows)) continue;
    rows.push_back(idx);
    rays = exhaustive_rays(geo, rows);
    // Until H has full rank the cone has a lineality space and no extreme
    // rays, so halfspaces are only pruned once it is pointed.
    if (!pointed) pointed = geo.rank(rows) == k;
    if (!pointed) continue;
    const std::vector<std::size_t> all = rows;
    prune_halfspaces(geo, rows, rays, all);
    if (closure_test(rays, make_halfspaces(m, rows), tol)) {
      dd.closed = true;
      break;
    }
  }
  dd.hrep = make_halfspaces(m, rows);
  dd.vrep = std::move(rays);
  return dd;
}

StableCone refine_dd(DoubleDescription dd, const ChangeMatrix& m, const Tolerances& tol) {
  if (!dd.closed) throw PreconditionError("refine_dd needs a closed initial superset");
  Geometry geo(m, tol);
  const auto k = static_cast<std::size_t>(geo.dim());
  std::vector<std::size_t> rows = source_rows(dd.hrep);
  std::vector<Ray> rays = std::move(dd.vrep);

  for (std::size_t pos = dd.consumed; pos < dd.order.size(); ++pos) {
    const std::size_t idx = dd.order[pos];
    if (geo.duplicates_direction(idx, rows)) continue;

    std::vector<Ray> kept;
    std::vector<Ray> excluded;
    for (auto& ray : rays) {
      const double s = geo.side(idx, ray.direction);
      if (s > tol.incidence) {
        excluded.push_back(std::move(ray));
      } else {
        if (s >= -tol.incidence) {
          ray.incidence.insert(std::upper_bound(ray.incidence.begin(), ray.incidence.end(), idx), idx);
        }
        kept.push_back(std::move(ray));
      }
    }
    // A halfspace that cuts off no ray is redundant.
    if (excluded.empty()) {
      rays = std::move(kept);
      for (auto& ray : rays) std::erase(ray.incidence, idx);
      continue;
    }

    rows.push_back(idx);
    std::set<std::size_t> affected{idx};
    for (const auto& ex : excluded) {
      affected.insert(ex.incidence.begin(), ex.incidence.end());
      for_each_subset(ex.incidence, k - 2, [&](std::span<const std::size_t> subset) {
        std::vector<std::size_t> hyperplanes(subset.begin(), subset.end());
        hyperplanes.push_back(idx);
        if (auto ray = geo.ray_through(hyperplanes, rows)) merge_ray(kept, std::move(*ray), tol.ray_match);
      });
    }
    rays = std::move(kept);
    if (rays.empty()) {
      throw InternalError("double description lost every ray of a feasible cone");
    }
    const std::vector<std::size_t> check(affected.begin(), affected.end());
    prune_halfspaces(geo, rows, rays, check);
  }

  StableCone out;
  out.status = ConeStatus::NonEmpty;
  out.tolerances = tol;
  std::sort(rows.begin(), rows.end());
  out.hrep = make_halfspaces(m, rows);
  std::sort(rays.begin(), rays.end(), [](const Ray& a, const Ray& b) {
    if (a.incidence != b.incidence) return a.incidence < b.incidence;
    return std::lexicographical_compare(a.direction.begin(), a.direction.end(),
                                        b.direction.begin(), b.direction.end());
  });
  out.vrep = std::move(rays);
  return out;
}

StableCone solve(const ChangeMatrix& m, const SolveOptions& options) {
  if (m.n_rows() == 0) throw EmptyAlternativeSetError("change matrix has no rows");
  StableCone out;
  out.seed = options.seed;
  out.tolerances = options.tolerances;
  const auto k = m.rows.cols();

  const Conflicts conflicts = detect_unstabilizable(m);
  const ChangeMatrix* working = &m;
  ChangeMatrix reduced;
  std::vector<std::size_t> row_map(m.n_rows());
  std::iota(row_map.begin(), row_map.end(), std::size_t{0});

  if (!conflicts.zero_rows.empty()) {
    if (!options.ignore_flat) {
      out.status = ConeStatus::Empty;
      out.certificate = EmptyCertificate{EmptyCertificate::Kind::ZeroRow, conflicts.zero_rows, {}};
      out.note = std::to_string(conflicts.zero_rows.size()) +
                 " alternative class(es) tie with the target for every theta";
      return out;
    }
    reduced = drop_rows(m, conflicts.zero_rows);
    row_map.clear();
    for (std::size_t r = 0; r < m.n_rows(); ++r)
      if (!contains_index(conflicts.zero_rows, r)) row_map.push_back(r);
    working = &reduced;
    out.note = "ignored " + std::to_string(conflicts.zero_rows.size()) + " flat row(s)";
    if (reduced.n_rows() == 0) {
      out.status = ConeStatus::Degenerate;
      out.note += "; no constraints remain";
      return out;
    }
  }
  if (!conflicts.opposite_pairs.empty()) {
    const auto [a, b] = conflicts.opposite_pairs.front();
    out.status = ConeStatus::Empty;
    out.certificate = EmptyCertificate{EmptyCertificate::Kind::OppositePair, {a, b}, {}};
    out.note = std::to_string(conflicts.opposite_pairs.size()) + " opposite row pair(s)";
    return out;
  }

  const FeasibilityResult fr = feasible(*working);
  if (!fr.feasible) {
    EmptyCertificate cert{EmptyCertificate::Kind::Infeasible, {}, {}};
    for (Eigen::Index r = 0; r < fr.weights.size(); ++r) {
      if (fr.weights[r] > 0) {
        cert.rows.push_back(row_map[static_cast<std::size_t>(r)]);
        cert.weights.push_back(fr.weights[r]);
      }
    }
    out.status = ConeStatus::Empty;
    out.certificate = std::move(cert);
    out.note = "strict system infeasible (margin " + std::to_string(fr.margin) + ")";
    return out;
  }

  const Eigen::Index rank = numerical_rank(normalize_rows(working->rows), options.tolerances.rank);
  if (rank < k) {
    out.status = ConeStatus::Degenerate;
    out.note = "rank(M) = " + std::to_string(rank) + " < K = " + std::to_string(k) +
               ": the cone contains a " + std::to_string(k - rank) +
               "-dimensional linear subspace and has no extreme rays";
    return out;
  }

  DoubleDescription dd = initial_superset(*working, options.seed, options.tolerances);
  if (!dd.closed) {
    throw InternalError("initial superset did not close although M has full rank");
  }
  StableCone refined = refine_dd(std::move(dd), *working, options.tolerances);

  for (auto& h : refined.hrep) h.source_row = row_map[h.source_row];
  for (auto& ray : refined.vrep)
    for (auto& r : ray.incidence) r = row_map[r];
  out.status = ConeStatus::NonEmpty;
  out.hrep = std::move(refined.hrep);
  out.vrep = std::move(refined.vrep);

  if (static_cast<Eigen::Index>(out.vrep.size()) < k) {
    throw InternalError("stable cone has fewer than K rays");
  }
  for (const auto& h : out.hrep) {
    const bool supported = std::any_of(out.vrep.begin(), out.vrep.end(), [&](const Ray& ray) {
      return std::binary_search(ray.incidence.begin(), ray.incidence.end(), h.source_row);
    });
    if (!supported) throw InternalError("retained halfspace has no incident ray");
  }
  return out;
}

bool contains(const ChangeMatrix& m, const Eigen::VectorXd& theta, double tol) {
  if (theta.size() != m.rows.cols()) {
    throw DimensionError("theta has " + std::to_string(theta.size()) + " entries, M has " +
                         std::to_string(m.rows.cols()) + " columns");
  }
  for (Eigen::Index r = 0; r < m.rows.rows(); ++r) {
    const double norm = m.rows.row(r).norm();
    if (!(m.rows.row(r).dot(theta) < -tol * norm) || norm == 0.0) return false;
  }
  return true;
}

bool contains(const StableCone& cone, const Eigen::VectorXd& theta) {
  if (cone.status != ConeStatus::NonEmpty) return false;
  for (const auto& h : cone.hrep) {
    if (h.normal.size() != theta.size()) throw DimensionError("theta dimension mismatch");
    const double norm = h.normal.norm();
    if (!(h.normal.dot(theta) < -cone.tolerances.membership * norm)) return false;
  }
  return true;
}

Eigen::VectorXd distances(const ChangeMatrix& m, const Eigen::VectorXd& theta) {
  if (theta.size() != m.rows.cols()) {
    throw DimensionError("theta has " + std::to_string(theta.size()) + " entries, M has " +
                         std::to_string(m.rows.cols()) + " columns");
  }
  const auto owner = m.row_of_alternative();
  Eigen::VectorXd per_row(m.rows.rows());
  for (Eigen::Index r = 0; r < m.rows.rows(); ++r) {
    const double norm = m.rows.row(r).norm();
    per_row[r] = norm == 0.0 ? 0.0 : m.rows.row(r).dot(theta) / norm;
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(owner.size()));
  for (std::size_t a = 0; a < owner.size(); ++a) {
    out[static_cast<Eigen::Index>(a)] =
        owner[a] < m.n_rows() ? per_row[static_cast<Eigen::Index>(owner[a])]
                              : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

bool cone_membership_scaling(const ChangeMatrix& m, const Eigen::VectorXd& theta1, double alpha,
                             double beta, const Eigen::VectorXd& theta2) {
  if (alpha < 0 || beta < 0 || alpha + beta <= 0) {
    throw PreconditionError("cone combination needs nonnegative weights, not both zero");
  }
  if (!contains(m, theta1) || !contains(m, theta2)) {
    throw PreconditionError("cone combination needs two members of the stable cone");
  }
  return contains(m, alpha * theta1 + beta * theta2);
}

}  // namespace stablecone
