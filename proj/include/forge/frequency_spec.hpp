#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "forge/immersion.hpp"

namespace forge {

/// One trigonometric mode: a coordinate 2-plane circle with integer
/// frequency vector w, radius r > 0 and phase phi.
struct Mode {
  Eigen::VectorXi w;
  double r = 1.0;
  double phi = 0.0;
};

struct IsometryReport {
  bool isometric = false;
  double defect = 0.0;  // || G - I ||_inf
};

/// Flat-torus immersion f(t) = sum_k r_k (cos(<w_k,t> + phi_k),
/// sin(<w_k,t> + phi_k)) into R^{2K}, defined on R^n / 2*pi*Z^n.
///
/// Construction validates: every w_k nonzero, K >= n, the K x n frequency
/// matrix has full integer rank n, all radii positive. The induced metric is
/// the constant matrix G = sum_k r_k^2 w_k w_k^T and the image lies on the
/// sphere of radius sqrt(sum r_k^2).
class FrequencySpec final : public Immersion {
 public:
  FrequencySpec(int n, std::vector<Mode> modes);

  /// Same, with phases drawn uniformly from [0, 2*pi) using the given seed.
  static FrequencySpec with_generic_phases(int n, std::vector<Mode> modes,
                                           std::uint64_t seed);

  int intrinsic_dim() const override { return n_; }
  int ambient_dim() const override { return 2 * static_cast<int>(modes_.size()); }
  int mode_count() const { return static_cast<int>(modes_.size()); }
  const std::vector<Mode>& modes() const { return modes_; }

  Eigen::VectorXd value(const Eigen::VectorXd& t) const override;
  Jet2 jet2(const Eigen::VectorXd& t) const override;

  /// G = sum_k r_k^2 w_k w_k^T (exact closed form).
  Metric induced_metric() const;

  IsometryReport is_isometric(double tol) const;

  /// Radius of the sphere carrying the image: sqrt(sum r_k^2).
  double enclosing_radius() const;

  /// t -> (1/i) f(j t): radii scaled by 1/i, frequencies multiplied by j.
  /// The induced metric scales by exactly j^2/i^2 and the curvature by i.
  FrequencySpec homothety_compress(double i, int j) const;

 private:
  int n_;
  std::vector<Mode> modes_;
};

/// Exact rank of an integer matrix (fraction-free elimination).
int integer_rank(const Eigen::MatrixXi& m);

}  // namespace forge
