#include "forge/freeness.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "forge/rng.hpp"

namespace forge {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

Eigen::VectorXd random_point(Rng& rng, int n) {
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) t[i] = rng.uniform(0.0, kTwoPi);
  return t;
}
}  // namespace

int osc2_rank(const Immersion& im, const Eigen::VectorXd& t, double tol,
              double* margin) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const int n = im.intrinsic_dim();
  const int m_amb = im.ambient_dim();
  const int rows = n + n * (n + 1) / 2;
  const Jet2 jet = im.jet2(t);

  Eigen::MatrixXd stack(rows, m_amb);
  for (int i = 0; i < n; ++i) stack.row(i) = jet.d1.col(i).transpose();
  int r = n;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      for (int m = 0; m < m_amb; ++m)
        stack(r, m) = jet.d2[static_cast<std::size_t>(m)](i, j);
      ++r;
    }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cutoff = tol * sv[0];
  int rank = 0;
  double smallest_retained = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) {
      ++rank;
      smallest_retained = sv[i];
    }
  }
  if (margin) *margin = cutoff > 0.0 ? smallest_retained / cutoff : 0.0;
  return rank;
}

OsculatingReport is_free(const Immersion& im, int trials, double tol,
                         std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const int n = im.intrinsic_dim();
  OsculatingReport rep;
  rep.required_rank = n + n * (n + 1) / 2;
  rep.min_rank = rep.required_rank;
  rep.margin = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (int s = 0; s < trials; ++s) {
    const Eigen::VectorXd t = random_point(rng, n);
    double margin = 0.0;
    const int rank = osc2_rank(im, t, tol, &margin);
    rep.points.push_back(t);
    rep.ranks.push_back(rank);
    rep.min_rank = std::min(rep.min_rank, rank);
    rep.margin = std::min(rep.margin, margin);
  }
  rep.free = rep.min_rank == rep.required_rank;
  return rep;
}

MFreeReport is_m_free(const FrequencySpec& spec, int m, int direction_trials,
                      int point_trials, double tol, std::uint64_t seed) {
  const int n = spec.intrinsic_dim();
  if (m < 1 || m > n) throw std::invalid_argument("need 1 <= m <= n");
  if (direction_trials < 1 || point_trials < 1)
    throw std::invalid_argument("trial counts must be positive");

  Rng rng(seed);
  MFreeReport rep;
  rep.m = m;
  rep.pass = true;

  for (int d = 0; d < direction_trials; ++d) {
    // rank-m integer direction matrix, entries in [-3, 3]; degenerate draws
    // are resampled
    Eigen::MatrixXi dir(n, m);
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000)
        throw std::runtime_error("failed to sample a rank-m direction matrix");
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
          dir(i, j) = static_cast<int>(rng.uniform_int(-3, 3));
      if (integer_rank(dir) == m) break;
    }
    rep.directions.push_back(dir);

    // restriction to the flat subtorus t0 + B s: frequencies become B^T w_k,
    // base-point offsets fold into the phases
    const Eigen::VectorXd t0 = random_point(rng, n);
    std::vector<Mode> modes;
    Eigen::MatrixXi restricted(spec.mode_count(), m);
    restricted.setZero();
    int idx = 0;
    for (const Mode& mode : spec.modes()) {
      Eigen::VectorXi w = dir.transpose() * mode.w;
      restricted.row(idx++) = w.transpose();
      if (w.isZero()) continue;  // constant mode: no jet contribution
      Mode r;
      r.w = w;
      r.r = mode.r;
      r.phi = mode.w.cast<double>().dot(t0) + mode.phi;
      modes.push_back(std::move(r));
    }

    const bool immersed =
        static_cast<int>(modes.size()) >= m && integer_rank(restricted) == m;
    rep.restriction_immersed.push_back(immersed);
    if (!immersed) {
      // the restriction is not even an immersion, hence not free
      OsculatingReport bad;
      bad.required_rank = m + m * (m + 1) / 2;
      bad.min_rank = 0;
      bad.free = false;
      rep.reports.push_back(bad);
      rep.pass = false;
      continue;
    }

    FrequencySpec restricted_spec(m, std::move(modes));
    OsculatingReport sub =
        is_free(restricted_spec, point_trials, tol, rng.next());
    rep.pass = rep.pass && sub.free;
    rep.reports.push_back(std::move(sub));
  }
  rep.directions_tested = direction_trials;
  return rep;
}

DimensionThresholds dimension_thresholds(int m, int n) {
  if (m < 1 || n < m) throw std::invalid_argument("need 1 <= m <= n");
  DimensionThresholds t;
  t.m = m;
  t.n = n;
  t.generic_m_free_ambient = m * (m + 1) / 2 + m * (n - m) + 2 * n;
  t.half_dim_min = (t.generic_m_free_ambient + 1) / 2;
  t.doubled_ambient_even = 2 * t.half_dim_min;
  t.free_isometric_torus_dim = n * (n + 1) / 2 + n + 2;
  t.ii_isometric_torus_dim = n * (n + 1) / 2 + n + 1;
  t.whitney_route_dim = 2 * m * (2 * m - 1) / 2 + 2 * m;
  return t;
}

}  // namespace forge
