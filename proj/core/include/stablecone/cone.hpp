#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stablecone/change_matrix.hpp"
#include "stablecone/feasibility.hpp"
#include "stablecone/linalg.hpp"

namespace stablecone {

/// Numerical thresholds of the cone solver. Dot products are taken between
/// unit normals and unit rays, so the thresholds are scale-free.
struct Tolerances {
  /// |n . r| at or below this puts ray r on hyperplane n; n . r above it
  /// puts r on the unstable side.
  double incidence = 1e-9;
  /// Two rows are parallel when |cos| >= 1 - parallel.
  double parallel = 1e-9;
  /// Relative singular-value cutoff for ranks and null spaces.
  double rank = kRankTolerance;
  /// Rays closer than this (max-norm) are the same ray.
  double ray_match = 1e-9;
  /// Strict membership needs M_i . theta < -membership * |M_i|.
  double membership = 1e-9;
};

/// Bounding halfspace {theta : normal . theta < 0}; normal is a raw row of M.
struct Halfspace {
  Eigen::VectorXd normal;
  std::size_t source_row = 0;
};

/// Extreme ray of the closed cone stored as a point on the unit sphere,
/// with the retained hyperplanes (source rows) that contain it.
struct Ray {
  Eigen::VectorXd direction;
  std::vector<std::size_t> incidence;
};

enum class ConeStatus { NonEmpty, Empty, Degenerate };

std::string to_string(ConeStatus status);

/// Why the stable cone is empty.
struct EmptyCertificate {
  enum class Kind {
    /// A zero change score: some alternative ties with the target for every theta.
    ZeroRow,
    /// Two rows with r' = -c r: their open half-spaces are disjoint.
    OppositePair,
    /// Convex weights w with sum_i w_i M_i / |M_i| = 0 (Gordan alternative).
    Infeasible,
  };
  Kind kind = Kind::Infeasible;
  std::vector<std::size_t> rows;
  std::vector<double> weights;
};

std::string to_string(EmptyCertificate::Kind kind);

/// The open stable cone {theta : M theta < 0} as a non-redundant double
/// description. Halfspaces are sorted by source row; rays by incidence.
struct StableCone {
  ConeStatus status = ConeStatus::Empty;
  std::vector<Halfspace> hrep;
  std::vector<Ray> vrep;
  std::optional<EmptyCertificate> certificate;
  std::string note;
  std::uint64_t seed = 0;
  Tolerances tolerances;
};

/// Working state of the double description method: the current halfspaces,
/// their extreme rays, and the seeded row order still to be processed.
struct DoubleDescription {
  std::vector<Halfspace> hrep;
  std::vector<Ray> vrep;
  /// Seeded permutation of the rows of M.
  std::vector<std::size_t> order;
  /// Rows order[0..consumed) have been seen by the initializer.
  std::size_t consumed = 0;
  bool closed = false;
};

/// Line through the K-1 hyperplanes `hyperplanes` (row indices of m), signed
/// so that it is strictly inside the first retained halfspace not containing
/// it, returned only if it lies in every halfspace listed in `retained`.
/// nullopt when the normals are rank-deficient or no sign is stable.
std::optional<Ray> intersect_to_ray(const ChangeMatrix& m,
                                    std::span<const std::size_t> hyperplanes,
                                    std::span<const std::size_t> retained,
                                    const Tolerances& tol = {});

/// Initial closed superset of the stable cone.
///
/// Seeds H with K-1 pairwise non-parallel, independent rows, then draws rows
/// in seeded order: every (K-1)-subset of H is intersected, rays violating
/// any halfspace are discarded, halfspaces that stop supporting a facet are
/// dropped, and the loop stops at the first closed hull. `closed` is false
/// when the rows run out first (M has rank < K).
/// Throws PreconditionError if the open cone is empty.
DoubleDescription initial_superset(const ChangeMatrix& m, std::uint64_t seed,
                                   const Tolerances& tol = {});

/// True iff |vrep| >= K and the conic hull of the rays has exactly |hrep|
/// facets. For K = 2 this reduces to two rays spanning an angle below pi.
bool closure_test(std::span<const Ray> vrep, std::span<const Halfspace> hrep,
                  const Tolerances& tol = {});

/// Adds the remaining rows of dd.order one at a time. A row that excludes no
/// ray is redundant and rejected; otherwise new rays are formed on the new
/// hyperplane from (K-2)-subsets of the hyperplanes through each excluded
/// ray, excluded rays are dropped, and halfspaces that no longer support a
/// facet are removed.
StableCone refine_dd(DoubleDescription dd, const ChangeMatrix& m, const Tolerances& tol = {});

struct SolveOptions {
  std::uint64_t seed = 0;
  /// Drop zero rows (ties for every theta) instead of reporting an empty cone.
  bool ignore_flat = false;
  Tolerances tolerances;
};

/// detect_unstabilizable -> feasible -> initial_superset -> refine_dd.
/// Source rows in the result index the rows of `m`.
StableCone solve(const ChangeMatrix& m, const SolveOptions& options = {});

/// Strict membership against every row of m.
bool contains(const ChangeMatrix& m, const Eigen::VectorXd& theta,
              double tol = Tolerances{}.membership);

/// Strict membership against the solved halfspaces; false unless NonEmpty.
bool contains(const StableCone& cone, const Eigen::VectorXd& theta);

/// Signed distance (M_i . theta) / |M_i| for every alternative, in
/// alternative order. Positive means theta violates that alternative's
/// halfspace. Zero rows give 0; alternatives whose row is absent give NaN.
Eigen::VectorXd distances(const ChangeMatrix& m, const Eigen::VectorXd& theta);

/// contains(m, alpha theta1 + beta theta2) for members theta1, theta2 and
/// nonnegative weights, not both zero. Throws PreconditionError otherwise.
bool cone_membership_scaling(const ChangeMatrix& m, const Eigen::VectorXd& theta1,
                             double alpha, double beta, const Eigen::VectorXd& theta2);

}  // namespace stablecone
