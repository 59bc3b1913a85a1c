#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forge/curvature.hpp"
#include "forge/frequency_spec.hpp"

namespace forge {

enum class PoolPolicy { sign_vectors, norm_bounded };
enum class SearchObjective { min_product, min_isotropy };

struct DesignSearchProblem {
  int n = 2;
  int k_max = 2;
  PoolPolicy pool = PoolPolicy::norm_bounded;
  int norm_bound = 25;  // max ||w||^2 under norm_bounded
  SearchObjective objective = SearchObjective::min_product;
  std::uint64_t seed = 1;
  int budget = 10000;  // annealing moves per chain
  int chains = 4;
  double t0 = 1.0;
  double cooling = 0.995;
  int stagnation_limit = 1500;
  CurvOptions scoring = CurvOptions::fast();
  CurvOptions final_report = CurvOptions();
};

struct DesignSearchResult {
  bool feasible = false;
  int n = 0;
  std::vector<Eigen::VectorXi> frequencies;  // support only, sorted
  Eigen::VectorXd weights;                   // r_k^2, matching frequencies
  double radius = 0.0;
  double product = 0.0;     // curv * R
  double delta_hat = 0.0;   // product - sqrt(3n/(n+2))
  double isotropy_defect = 0.0;
  CurvatureReport curvature;
  double isometry_residual = 0.0;
  bool isotropy_constrained = false;  // winning weights came from the 4-design LP
  std::uint64_t seed = 0;
  long long iterations = 0;
  std::string note;  // set when nothing feasible was found
};

enum class WeightStatus { ok, infeasible, failure };

struct WeightSolution {
  WeightStatus status = WeightStatus::failure;
  Eigen::VectorXd weights;  // r_k^2 >= 0
  double total = 0.0;       // sum of weights = R^2
  double residual = 0.0;
};

/// Linear program in the squared radii: sum_k x_k w_k w_k^T = I_n with
/// x >= 0, optionally also sum_k x_k <w_k, u>^4 = c ||u||^4 in coefficient
/// space with c free; minimizes sum x_k. Infeasibility is reported
/// separately from solver failure.
WeightSolution solve_weights(const std::vector<Eigen::VectorXi>& frequencies,
                             int n, bool fourth_moment_isotropy);

/// Candidate frequency pool under the given policy, one representative per
/// sign pair, sorted lexicographically.
std::vector<Eigen::VectorXi> build_pool(const DesignSearchProblem& problem);

/// Builds the spec for a search result (generic seeded phases).
FrequencySpec make_design_spec(const DesignSearchResult& result,
                               std::uint64_t phase_seed);

/// Seeded simulated annealing over frequency subsets of the pool; each
/// candidate is scored by solve_weights + the curvature product (the
/// 4-design-constrained weights are tried as well and win when they give a
/// lower product). Deterministic given the seed; parallel chains reduce by
/// best product with a lexicographic tie-break on the frequency multiset.
DesignSearchResult search(const DesignSearchProblem& problem);

/// Exact enumeration over all subsets of sizes n..k_max; guarded against
/// combinatorial blowup. Used as the oracle for the annealer at small scale.
DesignSearchResult exhaustive_search(const DesignSearchProblem& problem);

struct DeltaTableRow {
  int n = 0;
  int big_n = 0;   // ambient half-dimension N
  int k = 0;       // modes in the winning design
  double product = 0.0;
  double delta_hat = 0.0;
  std::uint64_t seed = 0;
};

/// One search per N with k_max = N; rows are made nonincreasing in N by
/// carrying the best design forward.
std::vector<DeltaTableRow> delta_table(const DesignSearchProblem& base,
                                       const std::vector<int>& n_values);

struct CliffordSubtorusResult {
  std::optional<FrequencySpec> spec;
  Eigen::MatrixXi a;  // N x n, A^T A = N I (empty for the n = N identity form)
  std::string note;
};

/// Searches integer N x n matrices A with A^T A = N I_n and nonzero rows;
/// the spec has modes (rows of A, r = 1/sqrt(N)), is isometric and lies on
/// the unit sphere. For n = N the canonical scaled-identity parametrization
/// of the full torus is returned instead (curv * R = sqrt(N) exactly).
CliffordSubtorusResult clifford_subtorus(int big_n, int n, int budget,
                                         std::uint64_t seed);

}  // namespace forge
