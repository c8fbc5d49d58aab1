#pragma once

#include <Eigen/Dense>

#include "stablecone/change_matrix.hpp"

namespace stablecone {

/// Outcome of the strict-feasibility linear program
///
///   maximize s  subject to  (M_i / |M_i|) . theta <= -s,  |theta|_inf <= 1.
///
/// The open cone {theta : M theta < 0} is nonempty iff the optimum s* > 0.
struct FeasibilityResult {
  bool feasible = false;
  /// Optimal s*: the largest normalized margin reachable in the unit box.
  double margin = 0.0;
  /// Optimal theta; strictly inside the cone when feasible.
  Eigen::VectorXd witness;
  /// Optimal dual weights over rows (y >= 0, sum y = 1). When infeasible they
  /// certify emptiness: sum_i y_i M_i / |M_i| = 0.
  Eigen::VectorXd weights;
};

/// Margins at or below this count as zero.
inline constexpr double kFeasibilityMargin = 1e-10;

/// Throws PreconditionError when `rows` has no rows.
FeasibilityResult feasible(const Eigen::MatrixXd& rows);
FeasibilityResult feasible(const ChangeMatrix& m);

}  // namespace stablecone
