#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "forge/frequency_spec.hpp"
#include "forge/parallel.hpp"

namespace forge {

/// Adaptive Simpson quadrature on [a, b]; used by the amplitude solver.
double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double tol);

/// Unit-speed closed curve on the flat 2-torus of side lengths (l0, l1) that
/// realizes an isometric embedding of the circle of length (1+eps)*l0,
/// winding once around the first factor. The tangent angle oscillates as
///   alpha(s) = a * cos(2*pi*q*s / L'),   L' = (1+eps)*l0,
/// and the amplitude a solves the closure condition
///   (1/2pi) * integral_0^{2pi} cos(a cos(phi)) dphi = 1/(1+eps)
/// by bisection on (0, pi) against adaptive quadrature; the integral is the
/// Bessel mean J0(a), monotone on that interval.
///
/// gamma(s) = (integral cos(alpha), integral sin(alpha)) has a closed-form
/// Bessel-coefficient Fourier series, so jets need no differencing.
class CorrugationCurve {
 public:
  CorrugationCurve(double eps, int q, double l0, double l1);

  double eps() const { return eps_; }
  int oscillations() const { return q_; }
  double amplitude() const { return amplitude_; }
  double base_length() const { return l0_; }
  double stretched_length() const { return stretched_length_; }

  double tangent_angle(double s) const;  // alpha(s)

  // position on the universal cover: along winds, transverse oscillates
  double along(double s) const;
  double transverse(double s) const;

  double along_d1(double s) const;       // cos(alpha)
  double transverse_d1(double s) const;  // sin(alpha)
  double along_d2(double s) const;
  double transverse_d2(double s) const;

  // lifted endpoint over one period minus (l0, 0), infinity norm
  double closure_residual() const;

 private:
  double eps_;
  int q_;
  double l0_, l1_;
  double stretched_length_;
  double omega_;
  double amplitude_;
  double mean_speed_;                  // J0(a)
  std::vector<double> even_coeffs_;    // J_{2k}(a), k >= 1
  std::vector<double> odd_coeffs_;     // J_{2k+1}(a), k >= 0
};

/// One bending step: stretch the branch currently terminating at circle
/// `index` (1-based) by (1+eps) and oscillate it q times into circle
/// index+1, which must exist and be unused.
struct CorrugationStep {
  double eps = 0.0;
  int q = 2;
  int index = 0;
};

/// A trigonometric immersion together with the unused circles of the
/// enclosing split torus that corrugation steps can grow into.
struct CascadeStart {
  std::shared_ptr<const FrequencySpec> spec;
  std::vector<Mode> extra;  // unused circles: radius and constant phase

  static CascadeStart split_torus(int n, const std::vector<double>& radii,
                                  const std::vector<double>& phases);
  static CascadeStart split_torus_seeded(int n, const std::vector<double>& radii,
                                         std::uint64_t phase_seed);
  /// Split subtorus of the Clifford torus: N circles of radius 1/sqrt(N),
  /// the first n carrying the intrinsic coordinates.
  static CascadeStart clifford(int big_n, int n, std::uint64_t phase_seed);
};

/// Composition of bending steps over a start configuration. Each step is an
/// isometric embedding of the stretched branch circle, applied in the
/// branch's arc-length parameter, so the map stays defined on
/// R^n / 2*pi*Z^n, the induced metric remains exactly constant, and the bent
/// branch's metric contribution scales by prod (1+eps)^2.
class CascadeImmersion final : public Immersion {
 public:
  CascadeImmersion(CascadeStart start, std::vector<CorrugationStep> steps);

  int intrinsic_dim() const override;
  int ambient_dim() const override;
  Jet2 jet2(const Eigen::VectorXd& t) const override;

  /// Exact constant induced metric of the composed map.
  Metric induced_metric() const;

  /// Lengths of the intrinsic coordinate circles under the induced flat
  /// metric, 2*pi*sqrt(G_bb).
  Eigen::VectorXd achieved_lengths() const;

  const std::vector<CorrugationStep>& steps() const { return steps_; }
  const std::vector<CorrugationCurve>& curves() const { return curves_; }
  const CascadeStart& start() const { return start_; }

 private:
  int circle_count() const;
  double circle_radius(int j) const;   // 0-based over spec then extra
  double circle_phase(int j) const;

  CascadeStart start_;
  std::vector<CorrugationStep> steps_;
  std::vector<CorrugationCurve> curves_;  // one per step, innermost first
  int chain_root_ = -1;                   // 0-based circle index, -1 if no steps
  double chain_stretch_ = 1.0;            // product of (1+eps)
};

CascadeImmersion cascade(CascadeStart start, std::vector<CorrugationStep> steps);

struct FlatnessReport {
  bool flat = false;
  double deviation = 0.0;  // max entrywise spread of D1^T D1 over samples
  int samples = 0;
};

/// Evaluates the induced metric at seeded sample points and reports the
/// largest pairwise deviation; flat iff it stays below tol.
FlatnessReport certify_flat(const Immersion& im, int samples, double tol,
                            std::uint64_t seed,
                            par::Exec exec = par::Exec::parallel);

}  // namespace forge
