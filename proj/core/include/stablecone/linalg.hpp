#pragma once

#include <Eigen/Dense>
#include <optional>

namespace stablecone {

/// Singular values below rel_tol * (largest) count as zero.
inline constexpr double kRankTolerance = 1e-10;

Eigen::Index numerical_rank(const Eigen::MatrixXd& a, double rel_tol = kRankTolerance);

/// Unit vector spanning the null space of a (K-1) x K system, or nullopt
/// when the rows are rank-deficient and no unique line exists. For K = 1
/// (no rows) the answer is (1).
std::optional<Eigen::VectorXd> null_direction(const Eigen::MatrixXd& a,
                                              double rel_tol = kRankTolerance);

/// Rows scaled to unit Euclidean length; zero rows stay zero.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& a);

}  // namespace stablecone
