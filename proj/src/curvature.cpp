#include "forge/curvature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "forge/rng.hpp"

namespace forge {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTieTol = 1e-9;

Eigen::MatrixXd metric_inv_sqrt(const Metric& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success)
    throw std::invalid_argument("metric eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("metric not positive definite");
  const Eigen::VectorXd inv_sqrt =
      es.eigenvalues().array().rsqrt().matrix();
  return es.eigenvectors() * inv_sqrt.asDiagonal() *
         es.eigenvectors().transpose();
}

Eigen::VectorXd canonical_sign(Eigen::VectorXd u) {
  const double lead_tol = 1e-7 * u.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) > lead_tol) {
      if (u[i] < 0.0) u = -u;
      break;
    }
  }
  return u;
}

// reverse-lexicographic comparison with tolerance; yields e1 < e2 < ... for
// coordinate directions, matching the documented tie-break
bool colex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = a.size() - 1; i >= 0; --i) {
    if (a[i] < b[i] - kTieTol) return true;
    if (a[i] > b[i] + kTieTol) return false;
  }
  return false;
}

struct AscentResult {
  double value = 0.0;
  Eigen::VectorXd v;
  double residual = 0.0;
};

AscentResult ascend(const QuarticForm& p, Eigen::VectorXd v, int max_iter,
                    double tol) {
  v.normalize();
  double value = p(v);
  double step = 0.5;
  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd grad = p.gradient(v);
    const double lambda = v.dot(grad);  // = 4 P(v) by homogeneity
    const Eigen::VectorXd rgrad = grad - lambda * v;
    residual = rgrad.norm();
    if (residual <= tol * std::max(1.0, std::abs(lambda))) break;
    bool improved = false;
    double s = step;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd cand = (v + s * rgrad).normalized();
      const double cv = p(cand);
      if (cv > value) {
        v = cand;
        value = cv;
        step = s * 1.5;
        improved = true;
        break;
      }
      s *= 0.4;
    }
    if (!improved) break;
  }
  return {value, v, residual};
}

struct GridBest {
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd v;
};

Eigen::VectorXd sphere_point3(double theta, double phi) {
  Eigen::VectorXd v(3);
  const double st = std::sin(theta);
  v << st * std::cos(phi), st * std::sin(phi), std::cos(theta);
  return v;
}

GridBest grid_scan(const QuarticForm& p, const CurvOptions& o) {
  const int n = p.dim();
  GridBest best;
  if (n == 1) {
    best.v = Eigen::VectorXd::Ones(1);
    best.value = p(best.v);
    return best;
  }
  if (n == 2) {
    const int res = o.grid_res;
    auto eval_angle = [&p](double theta) {
      Eigen::VectorXd v(2);
      v << std::cos(theta), std::sin(theta);
      return v;
    };
    const auto scan = par::argmax_scan(
        static_cast<std::size_t>(res),
        [&](std::size_t s) { return p(eval_angle(kPi * static_cast<double>(s) / res)); },
        o.exec);
    double center = kPi * static_cast<double>(scan.index) / res;
    double half = kPi / res;
    best.value = scan.value;
    best.v = eval_angle(center);
    for (int round = 0; round < o.refine_rounds; ++round) {
      const int rp = o.refine_points;
      double local_best = best.value;
      double local_center = center;
      for (int s = 0; s < rp; ++s) {
        const double theta = center - half + 2.0 * half * s / (rp - 1);
        const double val = p(eval_angle(theta));
        if (val > local_best) {
          local_best = val;
          local_center = theta;
        }
      }
      center = local_center;
      best.value = local_best;
      best.v = eval_angle(center);
      half = 2.0 * half / (rp - 1);
    }
    return best;
  }
  // n == 3: precomputed trig tables keep the base scan allocation-free
  const int res = o.grid_res;
  std::vector<double> sin_theta(static_cast<std::size_t>(res + 1));
  std::vector<double> cos_theta(static_cast<std::size_t>(res + 1));
  std::vector<double> sin_phi(static_cast<std::size_t>(res));
  std::vector<double> cos_phi(static_cast<std::size_t>(res));
  for (int i = 0; i <= res; ++i) {
    sin_theta[static_cast<std::size_t>(i)] = std::sin(kPi * i / res);
    cos_theta[static_cast<std::size_t>(i)] = std::cos(kPi * i / res);
  }
  for (int j = 0; j < res; ++j) {
    sin_phi[static_cast<std::size_t>(j)] = std::sin(2.0 * kPi * j / res);
    cos_phi[static_cast<std::size_t>(j)] = std::cos(2.0 * kPi * j / res);
  }
  const std::size_t count = static_cast<std::size_t>(res + 1) * res;
  const auto scan = par::argmax_scan(
      count,
      [&](std::size_t s) {
        const std::size_t i = s / static_cast<std::size_t>(res);
        const std::size_t j = s % static_cast<std::size_t>(res);
        const double v[3] = {sin_theta[i] * cos_phi[j],
                             sin_theta[i] * sin_phi[j], cos_theta[i]};
        return p.eval_raw(v);
      },
      o.exec);
  double theta_c = kPi * (static_cast<int>(scan.index) / res) / res;
  double phi_c = 2.0 * kPi * (static_cast<int>(scan.index) % res) / res;
  double h_theta = kPi / res;
  double h_phi = 2.0 * kPi / res;
  best.value = scan.value;
  best.v = sphere_point3(theta_c, phi_c);
  for (int round = 0; round < o.refine_rounds; ++round) {
    const int rp = o.refine_points;
    double local_best = best.value;
    double tc = theta_c, pc = phi_c;
    for (int a = 0; a < rp; ++a) {
      for (int b = 0; b < rp; ++b) {
        const double th = theta_c - h_theta + 2.0 * h_theta * a / (rp - 1);
        const double ph = phi_c - h_phi + 2.0 * h_phi * b / (rp - 1);
        const double val = p(sphere_point3(th, ph));
        if (val > local_best) {
          local_best = val;
          tc = th;
          pc = ph;
        }
      }
    }
    theta_c = tc;
    phi_c = pc;
    best.value = local_best;
    best.v = sphere_point3(theta_c, phi_c);
    h_theta = 2.0 * h_theta / (rp - 1);
    h_phi = 2.0 * h_phi / (rp - 1);
  }
  return best;
}
}  // namespace

double petrunin_bound(int n) {
  return std::sqrt(3.0 * n / (n + 2.0));
}

CurvatureReport max_on_sphere(const QuarticForm& q, const Metric& g,
                              const CurvOptions& opts) {
  const int n = q.dim();
  if (g.rows() != n || g.cols() != n)
    throw std::invalid_argument("metric dimension mismatch");
  const Eigen::MatrixXd b = metric_inv_sqrt(g);
  const QuarticForm p = q.transform(b);

  std::vector<Eigen::VectorXd> starts;
  for (int i = 0; i < n; ++i) starts.push_back(Eigen::VectorXd::Unit(n, i));
  starts.push_back(Eigen::VectorXd::Ones(n).normalized());
  Rng rng(opts.seed);
  while (static_cast<int>(starts.size()) < std::max(opts.multistart, n + 1)) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    if (v.norm() < 1e-8) continue;
    starts.push_back(v.normalized());
  }

  std::vector<AscentResult> results(starts.size());
  par::for_each_index(
      starts.size(),
      [&](std::size_t s) {
        results[s] = ascend(p, starts[s], opts.max_iter, opts.stationarity_tol);
      },
      opts.exec);

  double ascent_best = -std::numeric_limits<double>::infinity();
  double best_residual = std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    if (r.value > ascent_best) {
      ascent_best = r.value;
      best_residual = r.residual;
    }
  }

  GridBest grid;
  const bool grid_ran = opts.use_grid && n <= 3;
  if (grid_ran) grid = grid_scan(p, opts);

  CurvatureReport rep;
  rep.psi_max = grid_ran ? std::max(ascent_best, grid.value) : ascent_best;
  rep.curv = std::sqrt(std::max(0.0, rep.psi_max));
  rep.method = (grid_ran && grid.value > ascent_best) ? "grid-oracle"
                                                      : "multistart-ascent";
  rep.gap = grid_ran ? std::abs(ascent_best - grid.value) : best_residual;

  // candidates within the tie window, mapped back to G-unit directions
  std::vector<Eigen::VectorXd> candidates;
  auto push_candidate = [&](const Eigen::VectorXd& v, double value) {
    if (value < rep.psi_max - kTieTol) return;
    Eigen::VectorXd u = b * v;
    // snap stationarity noise to exact zeros before normalizing
    const double snap = 1e-7 * u.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < u.size(); ++i)
      if (std::abs(u[i]) < snap) u[i] = 0.0;
    const double gn = std::sqrt(u.dot(g * u));
    if (gn > 0.0) u /= gn;
    candidates.push_back(canonical_sign(u));
  };
  for (const auto& r : results) push_candidate(r.v, r.value);
  if (grid_ran) push_candidate(grid.v, grid.value);

  rep.argmax = candidates.front();
  for (const auto& c : candidates)
    if (colex_less(c, rep.argmax)) rep.argmax = c;
  return rep;
}

QuarticForm normal_curvature_form(const FrequencySpec& spec) {
  return QuarticForm::from_spec(spec);
}

CurvatureReport curv(const FrequencySpec& spec, const CurvOptions& opts) {
  return max_on_sphere(normal_curvature_form(spec), spec.induced_metric(),
                       opts);
}

PetruninReport petrunin_product_check(const FrequencySpec& spec,
                                      const CurvOptions& opts) {
  const IsometryReport iso = spec.is_isometric(1e-8);
  if (!iso.isometric)
    throw std::invalid_argument(
        "curvature product check requires an isometric spec");
  PetruninReport rep;
  rep.curvature = curv(spec, opts);
  rep.radius = spec.enclosing_radius();
  rep.product = rep.curvature.curv * rep.radius;
  rep.bound = petrunin_bound(spec.intrinsic_dim());
  rep.pass = rep.product >= rep.bound - 1e-6;
  return rep;
}

double isotropy_defect(const QuarticForm& q, const CurvOptions& opts) {
  const Metric id = Metric::Identity(q.dim(), q.dim());
  const double qmax = max_on_sphere(q, id, opts).psi_max;
  QuarticForm neg = q;
  neg *= -1.0;
  const double qmin = -max_on_sphere(neg, id, opts).psi_max;
  const double c = std::max(0.0, 0.5 * (qmax + qmin));
  return std::max(qmax - c, c - qmin);
}

SampledCurvature curv_sampled(const Immersion& im, int samples,
                              std::uint64_t seed, const CurvOptions& opts) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  Rng rng(seed);
  const int n = im.intrinsic_dim();
  SampledCurvature out;
  out.curv = -1.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) t[i] = rng.uniform(0.0, 2.0 * kPi);
    const Jet2 jet = im.jet2(t);
    const CurvatureReport rep =
        max_on_sphere(QuarticForm::from_jet(jet), jet.metric(), opts);
    if (rep.curv > out.curv) {
      out.curv = rep.curv;
      out.worst_point = t;
      out.report = rep;
    }
  }
  return out;
}

}  // namespace forge
