#pragma once

#include <Eigen/Dense>

namespace forge::lp {

enum class Status {
  optimal,
  infeasible,
  unbounded,
  numerical_failure,
};

struct Result {
  Status status = Status::numerical_failure;
  Eigen::VectorXd x;        // primal solution (optimal only)
  double objective = 0.0;
  Eigen::VectorXd duals;    // row multipliers y = c_B B^{-1}
  double residual = 0.0;    // || A x - b ||_inf at the reported solution
  // Farkas certificate when infeasible: y with y^T A <= 0 (componentwise)
  // and y^T b > 0.
  Eigen::VectorXd farkas;
};

/// Solves min c^T x subject to A x = b, x >= 0 with a dense two-phase
/// simplex (Bland's rule, hence deterministic and cycle-free). Intended for
/// the small moment-matching problems in this project: up to a few hundred
/// variables and under a hundred rows.
Result solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
             const Eigen::VectorXd& c);

}  // namespace forge::lp
