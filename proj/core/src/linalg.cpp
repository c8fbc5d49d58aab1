#include "stablecone/linalg.hpp"

namespace stablecone {

Eigen::Index numerical_rank(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s[k] > rel_tol * s[0]) ++rank;
  }
  return rank;
}

std::optional<Eigen::VectorXd> null_direction(const Eigen::MatrixXd& a, double rel_tol) {
  const Eigen::Index k = a.cols();
  if (a.rows() != k - 1) return std::nullopt;
  if (k == 1) return Eigen::VectorXd::Ones(1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s[0] == 0.0) return std::nullopt;
  for (Eigen::Index t = 0; t < s.size(); ++t) {
    if (s[t] <= rel_tol * s[0]) return std::nullopt;
  }
  Eigen::VectorXd x = svd.matrixV().col(k - 1);
  return x / x.norm();
}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd out = a;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double n = out.row(r).norm();
    if (n > 0) out.row(r) /= n;
  }
  return out;
}

}  // namespace stablecone
