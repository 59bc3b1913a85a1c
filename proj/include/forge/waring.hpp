#pragma once

#include <optional>
#include <vector>

#include "forge/quartic_form.hpp"

namespace forge {

enum class WaringStatus { inside, outside, numerical_failure };

/// Approximate membership of Q in the cone spanned by fourth powers of
/// linear forms, decided by a linear feasibility problem over a
/// deterministic sample of directions. One-sided: "inside" certifies a
/// nonnegative combination matching Q within slack tol on the sample;
/// "outside" carries a separating quartic, nonnegative at every sampled
/// direction and pairing negatively with Q.
struct WaringReport {
  WaringStatus status = WaringStatus::numerical_failure;
  bool inside = false;
  double slack = 0.0;  // attained coefficient mismatch (infinity norm)
  int samples = 0;
  std::optional<QuarticForm> certificate;
  double certificate_pairing = 0.0;
  double certificate_min_on_samples = 0.0;
};

WaringReport waring_cone_membership(const QuarticForm& q, int samples,
                                    double tol);

/// The deterministic direction sample used by the membership test.
std::vector<Eigen::VectorXd> waring_sample_directions(int n, int samples);

}  // namespace forge
