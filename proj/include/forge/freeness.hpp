#pragma once

#include <cstdint>
#include <vector>

#include "forge/frequency_spec.hpp"

namespace forge {

/// Sampled certificate of osculating-space ranks. "free" means the stacked
/// first and second derivatives reach rank n + n(n+1)/2 at every sampled
/// point; this is a certificate over the samples, not a proof over all t.
struct OsculatingReport {
  int required_rank = 0;
  int min_rank = 0;
  bool free = false;
  std::vector<int> ranks;                  // one per sample point
  std::vector<Eigen::VectorXd> points;
  double margin = 0.0;  // smallest retained singular value / (tol * sigma_max)
};

/// Numerical rank of the (n + n(n+1)/2) x M matrix stacking the first and
/// second partials at t; singular values below tol * sigma_max count as zero.
int osc2_rank(const Immersion& im, const Eigen::VectorXd& t, double tol,
              double* margin = nullptr);

OsculatingReport is_free(const Immersion& im, int trials, double tol,
                         std::uint64_t seed);

struct MFreeReport {
  int m = 0;
  bool pass = false;
  int directions_tested = 0;
  // per-direction summary: restriction matrices and their osculating reports
  std::vector<Eigen::MatrixXi> directions;
  std::vector<OsculatingReport> reports;
  std::vector<bool> restriction_immersed;  // rank of restricted frequencies = m
};

/// Samples integer n x m direction matrices (entries in [-3, 3], rank m) and
/// checks freeness of the restriction of the spec to the corresponding flat
/// subtorus. A randomized check of the universally quantified property,
/// restricted to linear subtori.
MFreeReport is_m_free(const FrequencySpec& spec, int m, int direction_trials,
                      int point_trials, double tol, std::uint64_t seed);

struct DimensionThresholds {
  int m = 0;
  int n = 0;
  int generic_m_free_ambient = 0;   // N >= m(m+1)/2 + m(n-m) + 2n
  int doubled_ambient_even = 0;     // smallest even 2N >= the same bound
  int half_dim_min = 0;             // the N of the bound above
  int free_isometric_torus_dim = 0; // n(n+1)/2 + n + 2
  int ii_isometric_torus_dim = 0;   // n(n+1)/2 + n + 1
  int whitney_route_dim = 0;        // 2m(2m-1)/2 + 2m
};

DimensionThresholds dimension_thresholds(int m, int n);

}  // namespace forge
