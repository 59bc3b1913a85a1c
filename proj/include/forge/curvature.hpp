#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "forge/frequency_spec.hpp"
#include "forge/parallel.hpp"
#include "forge/quartic_form.hpp"

namespace forge {

struct CurvOptions {
  int multistart = 64;
  std::uint64_t seed = 12345;
  int grid_res = 2000;       // base angular resolution of the n<=3 oracle
  int refine_rounds = 8;     // deterministic local refinement of the oracle
  int refine_points = 21;
  int max_iter = 400;
  double stationarity_tol = 1e-9;
  bool use_grid = true;
  par::Exec exec = par::Exec::parallel;

  static CurvOptions fast() {
    CurvOptions o;
    o.multistart = 24;
    o.grid_res = 401;
    return o;
  }
};

/// Result of maximizing a quartic form over a metric unit sphere.
/// psi_max is the attained maximum, curv its square root; argmax is G-unit
/// with canonical sign; gap is |multistart - grid| when the grid oracle ran
/// and the first-order stationarity residual otherwise.
struct CurvatureReport {
  double curv = 0.0;
  double psi_max = 0.0;
  Eigen::VectorXd argmax;
  std::string method;
  double gap = 0.0;
};

/// Maximizes Q(u,u,u,u) over { u : u^T G u = 1 } by multistart projected
/// gradient ascent; for n <= 3 a deterministic grid scan with local
/// refinement provides an independent lower bound. Ties among stationary
/// points within 1e-9 of the maximum break to the sign-canonical direction
/// that is smallest in reverse-lexicographic order.
CurvatureReport max_on_sphere(const QuarticForm& q, const Metric& g,
                              const CurvOptions& opts = CurvOptions());

/// The symmetric normal-curvature form: Q(u) = sum_k r_k^2 <w_k, u>^4, the
/// squared Hessian norm along the geodesic direction u.
QuarticForm normal_curvature_form(const FrequencySpec& spec);

/// curv(f) = sqrt(max Psi_f on the G-unit sphere).
CurvatureReport curv(const FrequencySpec& spec,
                     const CurvOptions& opts = CurvOptions());

struct PetruninReport {
  double product = 0.0;   // curv * enclosing radius
  double bound = 0.0;     // sqrt(3n / (n + 2))
  bool pass = false;
  double radius = 0.0;
  CurvatureReport curvature;
};

double petrunin_bound(int n);

/// Scale-invariant product check curv * R >= sqrt(3n/(n+2)) for isometric
/// specs. Throws std::invalid_argument when || G - I ||_inf > 1e-8.
PetruninReport petrunin_product_check(const FrequencySpec& spec,
                                      const CurvOptions& opts = CurvOptions());

/// min over c >= 0 of max_{|u|=1} |Q(u) - c|; zero exactly when Q is a
/// multiple of |u|^4.
double isotropy_defect(const QuarticForm& q,
                       const CurvOptions& opts = CurvOptions());

struct SampledCurvature {
  double curv = 0.0;
  Eigen::VectorXd worst_point;
  CurvatureReport report;  // report at the worst sample point
};

/// Extrinsic curvature of a general immersion, estimated as the maximum of
/// the per-point normal-curvature form over seeded sample points.
SampledCurvature curv_sampled(const Immersion& im, int samples,
                              std::uint64_t seed,
                              const CurvOptions& opts = CurvOptions());

}  // namespace forge
