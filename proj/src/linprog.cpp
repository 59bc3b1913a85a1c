#include "forge/linprog.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace forge::lp {

namespace {
constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;
constexpr double kFeasTol = 1e-8;
constexpr int kMaxIter = 200000;

struct Tableau {
  int m, n;                 // rows, structural columns
  Eigen::MatrixXd t;        // m x (n + m), columns n.. hold B^{-1}
  Eigen::VectorXd rhs;      // m
  std::vector<int> basis;   // m entries, indices into columns of t

  void pivot(int row, int col) {
    const double p = t(row, col);
    t.row(row) /= p;
    rhs[row] /= p;
    for (int r = 0; r < m; ++r) {
      if (r == row) continue;
      const double f = t(r, col);
      if (f == 0.0) continue;
      t.row(r) -= f * t.row(row);
      rhs[r] -= f * rhs[row];
    }
    basis[static_cast<std::size_t>(row)] = col;
  }
};

// Bland's rule iteration for min c^T x on the current tableau. `allowed`
// marks columns permitted to enter. Returns optimal/unbounded/failure.
Status run_simplex(Tableau& tb, const Eigen::VectorXd& cost,
                   const std::vector<bool>& allowed) {
  const int total = tb.n + tb.m;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    Eigen::VectorXd cb(tb.m);
    for (int r = 0; r < tb.m; ++r) cb[r] = cost[tb.basis[static_cast<std::size_t>(r)]];

    int entering = -1;
    for (int j = 0; j < total; ++j) {
      if (!allowed[static_cast<std::size_t>(j)]) continue;
      bool basic = false;
      for (int r = 0; r < tb.m; ++r)
        if (tb.basis[static_cast<std::size_t>(r)] == j) {
          basic = true;
          break;
        }
      if (basic) continue;
      const double reduced = cost[j] - cb.dot(tb.t.col(j));
      if (reduced < -kReducedCostTol) {
        entering = j;
        break;  // Bland: first improving index
      }
    }
    if (entering < 0) return Status::optimal;

    int leaving = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < tb.m; ++r) {
      const double a = tb.t(r, entering);
      if (a > kPivotTol) {
        const double ratio = tb.rhs[r] / a;
        if (leaving < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             tb.basis[static_cast<std::size_t>(r)] <
                 tb.basis[static_cast<std::size_t>(leaving)])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
    }
    if (leaving < 0) return Status::unbounded;
    tb.pivot(leaving, entering);
  }
  return Status::numerical_failure;
}
}  // namespace

Result solve(const Eigen::MatrixXd& a_in, const Eigen::VectorXd& b_in,
             const Eigen::VectorXd& c) {
  const int m = static_cast<int>(a_in.rows());
  const int n = static_cast<int>(a_in.cols());
  if (b_in.size() != m || c.size() != n)
    throw std::invalid_argument("linear program shape mismatch");

  Eigen::MatrixXd a = a_in;
  Eigen::VectorXd b = b_in;
  std::vector<int> sign(static_cast<std::size_t>(m), 1);
  for (int r = 0; r < m; ++r) {
    if (b[r] < 0.0) {
      a.row(r) = -a.row(r);
      b[r] = -b[r];
      sign[static_cast<std::size_t>(r)] = -1;
    }
  }

  Tableau tb;
  tb.m = m;
  tb.n = n;
  tb.t.resize(m, n + m);
  tb.t.leftCols(n) = a;
  tb.t.rightCols(m) = Eigen::MatrixXd::Identity(m, m);
  tb.rhs = b;
  tb.basis.resize(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) tb.basis[static_cast<std::size_t>(r)] = n + r;

  Result out;

  // phase 1: minimize the sum of artificials
  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m);
  phase1_cost.tail(m).setOnes();
  std::vector<bool> allow_all(static_cast<std::size_t>(n + m), true);
  Status s1 = run_simplex(tb, phase1_cost, allow_all);
  if (s1 != Status::optimal) {
    out.status = Status::numerical_failure;
    return out;
  }
  double art_sum = 0.0;
  for (int r = 0; r < m; ++r)
    if (tb.basis[static_cast<std::size_t>(r)] >= n) art_sum += tb.rhs[r];
  if (art_sum > kFeasTol) {
    out.status = Status::infeasible;
    Eigen::VectorXd cb(m);
    for (int r = 0; r < m; ++r)
      cb[r] = phase1_cost[tb.basis[static_cast<std::size_t>(r)]];
    Eigen::VectorXd y = tb.t.rightCols(m).transpose() * cb;  // c_B B^{-1}
    for (int r = 0; r < m; ++r) y[r] *= sign[static_cast<std::size_t>(r)];
    out.farkas = y;
    return out;
  }

  // drive basic artificials out where a structural pivot exists; fully
  // dependent rows keep their zero-level artificial and never pivot again
  for (int r = 0; r < m; ++r) {
    if (tb.basis[static_cast<std::size_t>(r)] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tb.t(r, j)) > 1e-7) {
        tb.pivot(r, j);
        break;
      }
    }
  }

  // phase 2
  Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(n + m);
  phase2_cost.head(n) = c;
  std::vector<bool> allowed(static_cast<std::size_t>(n + m), false);
  for (int j = 0; j < n; ++j) allowed[static_cast<std::size_t>(j)] = true;
  Status s2 = run_simplex(tb, phase2_cost, allowed);
  if (s2 == Status::unbounded) {
    out.status = Status::unbounded;
    return out;
  }
  if (s2 != Status::optimal) {
    out.status = Status::numerical_failure;
    return out;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r) {
    const int j = tb.basis[static_cast<std::size_t>(r)];
    if (j < n) x[j] = tb.rhs[r];
  }
  out.x = x;
  out.objective = c.dot(x);
  out.residual = (a_in * x - b_in).cwiseAbs().maxCoeff();

  Eigen::VectorXd cb(m);
  for (int r = 0; r < m; ++r)
    cb[r] = phase2_cost[tb.basis[static_cast<std::size_t>(r)]];
  Eigen::VectorXd y = tb.t.rightCols(m).transpose() * cb;
  for (int r = 0; r < m; ++r) y[r] *= sign[static_cast<std::size_t>(r)];
  out.duals = y;

  out.status = (out.residual <= 1e-8 * (1.0 + b_in.cwiseAbs().maxCoeff()))
                   ? Status::optimal
                   : Status::numerical_failure;
  return out;
}

}  // namespace forge::lp
