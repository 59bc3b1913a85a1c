#include "forge/waring.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "forge/linprog.hpp"
#include "forge/rng.hpp"

namespace forge {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

std::vector<Eigen::VectorXd> waring_sample_directions(int n, int samples) {
  std::vector<Eigen::VectorXd> dirs;
  if (n == 1) {
    dirs.push_back(Eigen::VectorXd::Ones(1));
    return dirs;
  }
  if (n == 2) {
    for (int s = 0; s < samples; ++s) {
      const double theta = kPi * s / samples;
      Eigen::VectorXd v(2);
      v << std::cos(theta), std::sin(theta);
      dirs.push_back(v);
    }
    return dirs;
  }
  if (n == 3) {
    // Fibonacci sphere
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int s = 0; s < samples; ++s) {
      const double z = 1.0 - (2.0 * s + 1.0) / samples;
      const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * s;
      Eigen::VectorXd v(3);
      v << rad * std::cos(phi), rad * std::sin(phi), z;
      dirs.push_back(v);
    }
    return dirs;
  }
  Rng rng(0xF1B0ULL);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd v(n);
    do {
      for (int i = 0; i < n; ++i) v[i] = rng.normal();
    } while (v.norm() < 1e-8);
    dirs.push_back(v.normalized());
  }
  return dirs;
}

WaringReport waring_cone_membership(const QuarticForm& q, int samples,
                                    double tol) {
  const int n = q.dim();
  if (n > 4) throw std::invalid_argument("membership test limited to n <= 4");
  if (samples < 100) throw std::invalid_argument("need at least 100 samples");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  const std::vector<Eigen::VectorXd> dirs = waring_sample_directions(n, samples);
  const int s_count = static_cast<int>(dirs.size());
  const int d = q.coefficient_count();

  // columns: x_s (s_count), t, slack_upper (d), slack_lower (d)
  // rows:    (A x)_e - t + s1_e = q_e  and  (A x)_e + t - s2_e = q_e
  const int cols = s_count + 1 + 2 * d;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * d, cols);
  Eigen::VectorXd b(2 * d);
  for (int e = 0; e < d; ++e) {
    const auto& idx = q.entries()[static_cast<std::size_t>(e)];
    for (int s = 0; s < s_count; ++s) {
      const Eigen::VectorXd& l = dirs[static_cast<std::size_t>(s)];
      const double coeff = l[idx[0]] * l[idx[1]] * l[idx[2]] * l[idx[3]];
      a(e, s) = coeff;
      a(d + e, s) = coeff;
    }
    a(e, s_count) = -1.0;
    a(d + e, s_count) = 1.0;
    a(e, s_count + 1 + e) = 1.0;
    a(d + e, s_count + 1 + d + e) = -1.0;
    b[e] = q.values()[static_cast<std::size_t>(e)];
    b[d + e] = q.values()[static_cast<std::size_t>(e)];
  }
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
  cost[s_count] = 1.0;

  const lp::Result res = lp::solve(a, b, cost);
  WaringReport rep;
  rep.samples = s_count;
  if (res.status != lp::Status::optimal) {
    rep.status = WaringStatus::numerical_failure;
    return rep;
  }
  rep.slack = res.objective;
  if (rep.slack <= tol) {
    rep.status = WaringStatus::inside;
    rep.inside = true;
    return rep;
  }

  rep.status = WaringStatus::outside;
  // separating functional from the duals: z = -(y1 + y2) satisfies
  // z . coeffs(l^4) >= 0 on the sample and z . coeffs(Q) = -t* < 0
  Eigen::VectorXd z(d);
  for (int e = 0; e < d; ++e) z[e] = -(res.duals[e] + res.duals[d + e]);
  QuarticForm cert(n);
  for (int e = 0; e < d; ++e) {
    const auto& idx = q.entries()[static_cast<std::size_t>(e)];
    cert.set_coefficient(idx[0], idx[1], idx[2], idx[3],
                         z[e] / q.multiplicities()[static_cast<std::size_t>(e)]);
  }
  double min_on_samples = std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& l : dirs)
    min_on_samples = std::min(min_on_samples, cert(l));
  rep.certificate_pairing = QuarticForm::pairing(cert, q);
  rep.certificate_min_on_samples = min_on_samples;
  rep.certificate = std::move(cert);
  return rep;
}

}  // namespace forge
