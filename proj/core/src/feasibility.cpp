#include "stablecone/feasibility.hpp"

#include <limits>
#include <vector>

#include "stablecone/error.hpp"
#include "stablecone/linalg.hpp"

namespace stablecone {
namespace {

// Dense primal simplex with Bland's rule on the dual of the margin LP:
//
//   minimize 1'u + 1'w  s.t.  N'y + u - w = 0,  1'y = 1,  y, u, w >= 0
//
// with N the normalized rows. It has K+1 equality rows regardless of how many
// rows M has, and its optimal value equals the margin s*. The optimal simplex
// multipliers (pi) are the primal (theta, s).
class MarginSimplex {
 public:
  explicit MarginSimplex(const Eigen::MatrixXd& normalized)
      : r_(normalized.rows()), k_(normalized.cols()), m_(k_ + 1), n_(r_ + 2 * k_) {
    a_ = Eigen::MatrixXd::Zero(m_, n_);
    a_.block(0, 0, k_, r_) = normalized.transpose();
    a_.block(0, r_, k_, k_) = Eigen::MatrixXd::Identity(k_, k_);
    a_.block(0, r_ + k_, k_, k_) = -Eigen::MatrixXd::Identity(k_, k_);
    a_.block(k_, 0, 1, r_).setOnes();
    b_ = Eigen::VectorXd::Zero(m_);
    b_[k_] = 1.0;
    c_ = Eigen::VectorXd::Zero(n_);
    c_.segment(r_, 2 * k_).setOnes();

    // Crash basis: y_0 = 1 and one of u_j / w_j absorbing N_0j.
    basis_.resize(static_cast<std::size_t>(m_));
    for (Eigen::Index j = 0; j < k_; ++j) {
      basis_[static_cast<std::size_t>(j)] = normalized(0, j) > 0 ? r_ + k_ + j : r_ + j;
    }
    basis_[static_cast<std::size_t>(k_)] = 0;
    refactor();
  }

  void run() {
    constexpr double kEps = 1e-12;
    int since_refactor = 0;
    while (true) {
      // Reduced costs; Bland: first improving column.
      const Eigen::VectorXd cb = basic_costs();
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (is_basic(j)) continue;
        const double rc = c_[j] - cb.dot(tableau_.col(j));
        if (rc < -kEps) {
          entering = j;
          break;
        }
      }
      if (entering < 0) break;

      Eigen::Index leave_row = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double t = tableau_(i, entering);
        if (t <= kEps) continue;
        const double ratio = rhs_[i] / t;
        if (ratio < best - kEps ||
            (ratio <= best + kEps && leave_row >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave_row)])) {
          best = std::min(best, ratio);
          leave_row = i;
        }
      }
      if (leave_row < 0) throw InternalError("margin LP reported unbounded");
      pivot(leave_row, entering);
      if (++since_refactor == 64) {
        refactor();
        since_refactor = 0;
      }
    }
    refactor();
  }

  [[nodiscard]] double objective() const { return basic_costs().dot(rhs_); }

  [[nodiscard]] Eigen::VectorXd multipliers() const {
    return basis_matrix().transpose().partialPivLu().solve(basic_costs());
  }

  [[nodiscard]] Eigen::VectorXd row_weights() const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(r_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index col = basis_[static_cast<std::size_t>(i)];
      if (col < r_) y[col] = std::max(0.0, rhs_[i]);
    }
    return y;
  }

 private:
  [[nodiscard]] bool is_basic(Eigen::Index col) const {
    for (auto b : basis_)
      if (b == col) return true;
    return false;
  }

  [[nodiscard]] Eigen::VectorXd basic_costs() const {
    Eigen::VectorXd cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb[i] = c_[basis_[static_cast<std::size_t>(i)]];
    return cb;
  }

  [[nodiscard]] Eigen::MatrixXd basis_matrix() const {
    Eigen::MatrixXd b(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) b.col(i) = a_.col(basis_[static_cast<std::size_t>(i)]);
    return b;
  }

  void refactor() {
    const auto lu = basis_matrix().partialPivLu();
    tableau_ = lu.solve(a_);
    rhs_ = lu.solve(b_);
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    const double p = tableau_(row, col);
    tableau_.row(row) /= p;
    rhs_[row] /= p;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = tableau_(i, col);
      if (f == 0.0) continue;
      tableau_.row(i) -= f * tableau_.row(row);
      rhs_[i] -= f * rhs_[row];
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  Eigen::Index r_, k_, m_, n_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_, c_;
  Eigen::MatrixXd tableau_;
  Eigen::VectorXd rhs_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

FeasibilityResult feasible(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) throw PreconditionError("feasibility check needs at least one row");
  if (rows.cols() == 0) throw DimensionError("feasibility check needs at least one column");
  const Eigen::MatrixXd normalized = normalize_rows(rows);
  MarginSimplex lp(normalized);
  lp.run();

  FeasibilityResult out;
  out.margin = lp.objective();
  const Eigen::VectorXd pi = lp.multipliers();
  out.witness = pi.head(rows.cols());
  out.weights = lp.row_weights();
  out.feasible = out.margin > kFeasibilityMargin;
  if (out.feasible) {
    // The multipliers are only as good as the final basis solve; confirm.
    const Eigen::VectorXd slack = normalized * out.witness;
    if (slack.maxCoeff() >= 0.0) {
      throw InternalError("margin LP witness does not satisfy the strict system");
    }
  }
  return out;
}

FeasibilityResult feasible(const ChangeMatrix& m) { return feasible(m.rows); }

}  // namespace stablecone
