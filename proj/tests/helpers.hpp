#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "forge/design_search.hpp"
#include "forge/frequency_spec.hpp"
#include "forge/immersion.hpp"
#include "forge/rng.hpp"

namespace testutil {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// independent order-2 jet oracle. The first derivatives come from central
// differences of values; the second derivatives from central differences of
// the exact first derivatives, which keeps the roundoff floor near 1e-9
// (a direct second difference of values bottoms out around 1e-6).
struct FdJet {
  Eigen::MatrixXd d1;
  std::vector<Eigen::MatrixXd> d2;
};

inline FdJet finite_difference_jet(const forge::Immersion& im,
                                   const Eigen::VectorXd& t, double h) {
  const int n = im.intrinsic_dim();
  const int m = im.ambient_dim();
  FdJet out;
  out.d1.resize(m, n);
  out.d2.assign(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd tp = t, tm = t;
    tp[i] += h;
    tm[i] -= h;
    out.d1.col(i) = (im.value(tp) - im.value(tm)) / (2.0 * h);
    const Eigen::MatrixXd dp = im.jet2(tp).d1;
    const Eigen::MatrixXd dm = im.jet2(tm).d1;
    const Eigen::MatrixXd column = (dp - dm) / (2.0 * h);  // m x n slice d2[., i, .]
    for (int c = 0; c < m; ++c)
      for (int j = 0; j < n; ++j)
        out.d2[static_cast<std::size_t>(c)](i, j) = column(c, j);
  }
  // symmetrize the oracle (mixed partials commute)
  for (int c = 0; c < m; ++c) {
    auto& h2 = out.d2[static_cast<std::size_t>(c)];
    h2 = 0.5 * (h2 + h2.transpose()).eval();
  }
  return out;
}

// Romberg integration: an oracle independent of the adaptive Simpson rule
// used inside the library
inline double romberg(const std::function<double(double)>& f, double a,
                      double b, int levels = 20) {
  std::vector<std::vector<double>> r(static_cast<std::size_t>(levels));
  double h = b - a;
  r[0] = {0.5 * h * (f(a) + f(b))};
  for (int k = 1; k < levels; ++k) {
    h *= 0.5;
    double sum = 0.0;
    const long long count = 1LL << (k - 1);
    for (long long i = 0; i < count; ++i)
      sum += f(a + (2.0 * i + 1.0) * h);
    r[static_cast<std::size_t>(k)].push_back(
        0.5 * r[static_cast<std::size_t>(k - 1)][0] + h * sum);
    for (int j = 1; j <= k; ++j) {
      const double prev = r[static_cast<std::size_t>(k)][static_cast<std::size_t>(j - 1)];
      const double up = r[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
      const double factor = std::pow(4.0, j);
      r[static_cast<std::size_t>(k)].push_back(prev + (prev - up) / (factor - 1.0));
    }
  }
  return r[static_cast<std::size_t>(levels - 1)].back();
}

inline Eigen::VectorXd random_torus_point(forge::Rng& rng, int n) {
  Eigen::VectorXd t(n);
  for (int i = 0; i < n; ++i) t[i] = rng.uniform(0.0, kTwoPi);
  return t;
}

// seeded random isometric spec: random small frequencies, weights from the
// moment-matching program, generic phases
inline forge::FrequencySpec random_isometric_spec(int n, std::uint64_t seed) {
  forge::Rng rng(seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Eigen::VectorXi> freqs;
    const int k = n + 2 + static_cast<int>(rng.uniform_int(0, 4));
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXi w(n);
      bool zero = true;
      for (int c = 0; c < n; ++c) {
        w[c] = static_cast<int>(rng.uniform_int(-3, 3));
        zero = zero && w[c] == 0;
      }
      if (zero) w[static_cast<int>(rng.uniform_int(0, n - 1))] = 1;
      freqs.push_back(w);
    }
    const forge::WeightSolution sol = forge::solve_weights(freqs, n, false);
    if (sol.status != forge::WeightStatus::ok) continue;
    std::vector<forge::Mode> modes;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      if (sol.weights[static_cast<Eigen::Index>(i)] < 1e-12) continue;
      forge::Mode m;
      m.w = freqs[i];
      m.r = std::sqrt(sol.weights[static_cast<Eigen::Index>(i)]);
      m.phi = rng.uniform(0.0, kTwoPi);
      modes.push_back(std::move(m));
    }
    if (static_cast<int>(modes.size()) < n) continue;
    try {
      return forge::FrequencySpec(n, std::move(modes));
    } catch (...) {
      continue;
    }
  }
  throw std::runtime_error("failed to generate a random isometric spec");
}

inline forge::FrequencySpec unit_circle() {
  forge::Mode m;
  m.w = Eigen::VectorXi::Ones(1);
  return forge::FrequencySpec(1, {m});
}

inline forge::FrequencySpec product_torus() {
  forge::Mode a, b;
  a.w = Eigen::Vector2i(1, 0);
  b.w = Eigen::Vector2i(0, 1);
  return forge::FrequencySpec(2, {a, b});
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("forge_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace testutil
