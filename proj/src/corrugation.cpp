#include "forge/corrugation.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "forge/rng.hpp"

namespace forge {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kAmplitudeTol = 1e-13;
constexpr double kQuadTol = 1e-13;

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double fm, double whole,
                     double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, flm);
  const double right = simpson(f, m, fm, b, fb, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(f, a, fa, b, fb, fm);
  return adaptive_step(f, a, fa, b, fb, fm, whole, tol, 40);
}

CorrugationCurve::CorrugationCurve(double eps, int q, double l0, double l1)
    : eps_(eps), q_(q), l0_(l0), l1_(l1) {
  if (!(eps > 0.0)) throw std::invalid_argument("stretch eps must be positive");
  if (q < 2) throw std::invalid_argument("oscillation count must be >= 2");
  if (!(l0 > 0.0) || !(l1 > 0.0))
    throw std::invalid_argument("circle lengths must be positive");
  stretched_length_ = (1.0 + eps) * l0;
  omega_ = kTwoPi * q / stretched_length_;

  const double target = 1.0 / (1.0 + eps);
  auto mean_cos = [](double a) {
    return adaptive_quadrature(
               [a](double phi) { return std::cos(a * std::cos(phi)); }, 0.0,
               kTwoPi, kQuadTol) /
           kTwoPi;
  };
  double lo = 0.0, hi = kPi;
  double flo = 1.0 - target;
  double fhi = mean_cos(hi) - target;
  if (flo <= 0.0 || fhi >= 0.0) {
    std::ostringstream msg;
    msg << "no amplitude in (0, pi) for eps=" << eps
        << "; the single-harmonic ansatz needs 1/(1+eps) in ("
        << mean_cos(kPi) << ", 1)";
    throw std::domain_error(msg.str());
  }
  while (hi - lo > kAmplitudeTol) {
    const double mid = 0.5 * (lo + hi);
    if (mean_cos(mid) - target > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  amplitude_ = 0.5 * (lo + hi);

  mean_speed_ = std::cyl_bessel_j(0.0, amplitude_);
  for (int k = 1; k <= 80; ++k) {
    const double j = std::cyl_bessel_j(2.0 * k, amplitude_);
    even_coeffs_.push_back(j);
    if (std::abs(j) < 1e-18) break;
  }
  for (int k = 0; k <= 80; ++k) {
    const double j = std::cyl_bessel_j(2.0 * k + 1.0, amplitude_);
    odd_coeffs_.push_back(j);
    if (std::abs(j) < 1e-18) break;
  }
}

double CorrugationCurve::tangent_angle(double s) const {
  return amplitude_ * std::cos(omega_ * s);
}

double CorrugationCurve::along(double s) const {
  // integral of cos(a cos(w s)) via the Jacobi-Anger series
  double sum = mean_speed_ * s;
  const double phase = omega_ * s;
  double sign = -1.0;
  for (std::size_t k = 0; k < even_coeffs_.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    sum += sign * even_coeffs_[k] * std::sin(2.0 * kk * phase) / (kk * omega_);
    sign = -sign;
  }
  return sum;
}

double CorrugationCurve::transverse(double s) const {
  double sum = 0.0;
  const double phase = omega_ * s;
  double sign = 1.0;
  for (std::size_t k = 0; k < odd_coeffs_.size(); ++k) {
    const double m = 2.0 * static_cast<double>(k) + 1.0;
    sum += sign * 2.0 * odd_coeffs_[k] * std::sin(m * phase) / (m * omega_);
    sign = -sign;
  }
  return sum;
}

double CorrugationCurve::along_d1(double s) const {
  return std::cos(tangent_angle(s));
}

double CorrugationCurve::transverse_d1(double s) const {
  return std::sin(tangent_angle(s));
}

double CorrugationCurve::along_d2(double s) const {
  return amplitude_ * omega_ * std::sin(omega_ * s) *
         std::sin(tangent_angle(s));
}

double CorrugationCurve::transverse_d2(double s) const {
  return -amplitude_ * omega_ * std::sin(omega_ * s) *
         std::cos(tangent_angle(s));
}

double CorrugationCurve::closure_residual() const {
  const double da = along(stretched_length_) - l0_;
  const double dt = transverse(stretched_length_);
  return std::max(std::abs(da), std::abs(dt));
}

CascadeStart CascadeStart::split_torus(int n, const std::vector<double>& radii,
                                       const std::vector<double>& phases) {
  if (static_cast<int>(radii.size()) < n)
    throw std::invalid_argument("need at least n circles");
  if (phases.size() != radii.size())
    throw std::invalid_argument("one phase per circle required");
  std::vector<Mode> modes;
  for (int j = 0; j < n; ++j) {
    Mode m;
    m.w = Eigen::VectorXi::Unit(n, j);
    m.r = radii[static_cast<std::size_t>(j)];
    m.phi = phases[static_cast<std::size_t>(j)];
    modes.push_back(std::move(m));
  }
  CascadeStart start;
  start.spec = std::make_shared<FrequencySpec>(n, std::move(modes));
  for (std::size_t j = static_cast<std::size_t>(n); j < radii.size(); ++j) {
    Mode m;
    m.w = Eigen::VectorXi();
    m.r = radii[j];
    m.phi = phases[j];
    start.extra.push_back(std::move(m));
  }
  return start;
}

CascadeStart CascadeStart::split_torus_seeded(int n,
                                              const std::vector<double>& radii,
                                              std::uint64_t phase_seed) {
  Rng rng(phase_seed);
  std::vector<double> phases(radii.size());
  for (double& p : phases) p = rng.uniform(0.0, kTwoPi);
  return split_torus(n, radii, phases);
}

CascadeStart CascadeStart::clifford(int big_n, int n, std::uint64_t phase_seed) {
  if (big_n < n || n < 1) throw std::invalid_argument("need 1 <= n <= N");
  const std::vector<double> radii(static_cast<std::size_t>(big_n),
                                  1.0 / std::sqrt(static_cast<double>(big_n)));
  return split_torus_seeded(n, radii, phase_seed);
}

int CascadeImmersion::circle_count() const {
  return start_.spec->mode_count() + static_cast<int>(start_.extra.size());
}

double CascadeImmersion::circle_radius(int j) const {
  const int k = start_.spec->mode_count();
  return j < k ? start_.spec->modes()[static_cast<std::size_t>(j)].r
               : start_.extra[static_cast<std::size_t>(j - k)].r;
}

double CascadeImmersion::circle_phase(int j) const {
  const int k = start_.spec->mode_count();
  return j < k ? start_.spec->modes()[static_cast<std::size_t>(j)].phi
               : start_.extra[static_cast<std::size_t>(j - k)].phi;
}

CascadeImmersion::CascadeImmersion(CascadeStart start,
                                   std::vector<CorrugationStep> steps)
    : start_(std::move(start)), steps_(std::move(steps)) {
  if (!start_.spec) throw std::invalid_argument("cascade start has no spec");
  for (const Mode& m : start_.extra)
    if (!(m.r > 0.0))
      throw std::invalid_argument("extra circle radius must be positive");

  const int total = circle_count();
  int terminal = start_.spec->mode_count();  // 1-based index of bendable circle
  double branch_length = kTwoPi * circle_radius(terminal - 1);
  for (const CorrugationStep& step : steps_) {
    if (step.index != terminal) {
      std::ostringstream msg;
      msg << "step index " << step.index
          << " does not target the terminal circle (expected " << terminal
          << ")";
      throw std::invalid_argument(msg.str());
    }
    if (step.index + 1 > total)
      throw std::invalid_argument(
          "no unused circle available for the bending step");
    const double new_len = kTwoPi * circle_radius(step.index);  // circle index+1, 0-based
    curves_.emplace_back(step.eps, step.q, branch_length, new_len);
    branch_length *= (1.0 + step.eps);
    chain_stretch_ *= (1.0 + step.eps);
    ++terminal;
  }
  if (!steps_.empty()) chain_root_ = start_.spec->mode_count() - 1;
}

int CascadeImmersion::intrinsic_dim() const {
  return start_.spec->intrinsic_dim();
}

int CascadeImmersion::ambient_dim() const { return 2 * circle_count(); }

Jet2 CascadeImmersion::jet2(const Eigen::VectorXd& t) const {
  check_point(t);
  const int n = intrinsic_dim();
  const int circles = circle_count();
  const int k_spec = start_.spec->mode_count();
  const int chain_len = static_cast<int>(curves_.size());

  Jet2 jet;
  jet.value.resize(2 * circles);
  jet.d1 = Eigen::MatrixXd::Zero(2 * circles, n);
  jet.d2.assign(static_cast<std::size_t>(2 * circles),
                Eigen::MatrixXd::Zero(n, n));

  // scalar angle data per circle; chain circles depend on t only through
  // s = stretch * rho_root * (<w_root, t> + phi_root)
  Eigen::VectorXd angle(circles);
  Eigen::VectorXd dangle_ds = Eigen::VectorXd::Zero(circles);
  Eigen::VectorXd d2angle_ds = Eigen::VectorXd::Zero(circles);
  std::vector<bool> on_chain(static_cast<std::size_t>(circles), false);

  Eigen::VectorXd w_root;
  double s_scale = 0.0;  // d s / d <w_root, t>
  if (chain_len > 0) {
    const Mode& root = start_.spec->modes()[static_cast<std::size_t>(chain_root_)];
    w_root = root.w.cast<double>();
    const double rho_root = root.r;
    s_scale = chain_stretch_ * rho_root;
    const double s_top = s_scale * (w_root.dot(t) + root.phi);

    // descend the curve stack: arg_p is the parameter of curve p, with
    // derivatives taken with respect to the top-level arc length s_top
    double arg = s_top, darg = 1.0, d2arg = 0.0;
    for (int p = chain_len - 1; p >= 0; --p) {
      const CorrugationCurve& c = curves_[static_cast<std::size_t>(p)];
      const int circle = chain_root_ + 1 + p;  // 0-based target of step p
      const double rho = circle_radius(circle);
      const double beta = c.transverse(arg);
      const double beta1 = c.transverse_d1(arg);
      const double beta2 = c.transverse_d2(arg);
      angle[circle] = circle_phase(circle) + beta / rho;
      dangle_ds[circle] = beta1 * darg / rho;
      d2angle_ds[circle] = (beta2 * darg * darg + beta1 * d2arg) / rho;
      on_chain[static_cast<std::size_t>(circle)] = true;

      const double s1 = c.along_d1(arg);
      const double s2 = c.along_d2(arg);
      const double new_arg = c.along(arg);
      d2arg = s2 * darg * darg + s1 * d2arg;
      darg = s1 * darg;
      arg = new_arg;
    }
    const double rho_r = circle_radius(chain_root_);
    angle[chain_root_] = arg / rho_r;
    dangle_ds[chain_root_] = darg / rho_r;
    d2angle_ds[chain_root_] = d2arg / rho_r;
    on_chain[static_cast<std::size_t>(chain_root_)] = true;
  }

  for (int j = 0; j < circles; ++j) {
    const double rho = circle_radius(j);
    Eigen::VectorXd da = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd d2a = Eigen::MatrixXd::Zero(n, n);
    double a;
    if (on_chain[static_cast<std::size_t>(j)]) {
      a = angle[j];
      da = (dangle_ds[j] * s_scale) * w_root;
      d2a = (d2angle_ds[j] * s_scale * s_scale) * (w_root * w_root.transpose());
    } else if (j < k_spec) {
      const Mode& m = start_.spec->modes()[static_cast<std::size_t>(j)];
      a = m.w.cast<double>().dot(t) + m.phi;
      da = m.w.cast<double>();
    } else {
      a = circle_phase(j);
    }
    const double c = std::cos(a), s = std::sin(a);
    const Eigen::Index rc = 2 * j, rs = 2 * j + 1;
    jet.value[rc] = rho * c;
    jet.value[rs] = rho * s;
    jet.d1.row(rc) = -rho * s * da.transpose();
    jet.d1.row(rs) = rho * c * da.transpose();
    const Eigen::MatrixXd dada = da * da.transpose();
    jet.d2[static_cast<std::size_t>(rc)] = rho * (-s * d2a - c * dada);
    jet.d2[static_cast<std::size_t>(rs)] = rho * (c * d2a - s * dada);
  }
  return jet;
}

Metric CascadeImmersion::induced_metric() const {
  Metric g = start_.spec->induced_metric();
  if (!steps_.empty()) {
    const Mode& root = start_.spec->modes()[static_cast<std::size_t>(chain_root_)];
    const Eigen::VectorXd w = root.w.cast<double>();
    g += (chain_stretch_ * chain_stretch_ - 1.0) * root.r * root.r *
         (w * w.transpose());
  }
  return g;
}

Eigen::VectorXd CascadeImmersion::achieved_lengths() const {
  const Metric g = induced_metric();
  Eigen::VectorXd lengths(intrinsic_dim());
  for (int b = 0; b < intrinsic_dim(); ++b)
    lengths[b] = kTwoPi * std::sqrt(g(b, b));
  return lengths;
}

CascadeImmersion cascade(CascadeStart start, std::vector<CorrugationStep> steps) {
  return CascadeImmersion(std::move(start), std::move(steps));
}

FlatnessReport certify_flat(const Immersion& im, int samples, double tol,
                            std::uint64_t seed, par::Exec exec) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  const int n = im.intrinsic_dim();
  Rng rng(seed);
  std::vector<Eigen::VectorXd> points(static_cast<std::size_t>(samples));
  for (auto& p : points) {
    p.resize(n);
    for (int i = 0; i < n; ++i) p[i] = rng.uniform(0.0, kTwoPi);
  }
  std::vector<Eigen::MatrixXd> metrics(points.size(),
                                       Eigen::MatrixXd::Zero(n, n));
  par::for_each_index(
      points.size(),
      [&](std::size_t s) { metrics[s].noalias() = im.metric_at(points[s]); },
      exec);

  Eigen::MatrixXd lo = metrics.front(), hi = metrics.front();
  for (const auto& g : metrics) {
    lo = lo.cwiseMin(g);
    hi = hi.cwiseMax(g);
  }
  FlatnessReport rep;
  rep.samples = samples;
  rep.deviation = (hi - lo).maxCoeff();
  rep.flat = rep.deviation < tol;
  return rep;
}

}  // namespace forge
