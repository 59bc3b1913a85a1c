#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "forge/corrugation.hpp"
#include "forge/curvature.hpp"
#include "forge/parallel.hpp"
#include "forge/rng.hpp"
#include "helpers.hpp"

using namespace forge;

TEST_CASE("argmax scan: serial and parallel agree bitwise") {
  Rng rng(1);
  std::vector<double> values(100001);
  for (double& v : values) v = rng.uniform(-1.0, 1.0);
  values[77777] = 2.0;
  values[88888] = 2.0;  // duplicate maximum: lowest index must win
  auto f = [&](std::size_t i) { return values[i]; };
  const par::ScanBest serial = par::argmax_scan(values.size(), f, par::Exec::serial);
  const par::ScanBest parallel =
      par::argmax_scan(values.size(), f, par::Exec::parallel);
  CHECK(serial.index == 77777);
  CHECK(parallel.index == 77777);
  CHECK(serial.value == parallel.value);
}

TEST_CASE("for_each_index covers every slot once") {
  std::vector<int> counts(5000, 0);
  par::for_each_index(counts.size(), [&](std::size_t i) { ++counts[i]; },
                      par::Exec::parallel);
  for (int c : counts) CHECK(c == 1);
}

TEST_CASE("sphere maximization identical across execution modes") {
  Rng rng(2);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + (trial % 2);
    QuarticForm q(n);
    for (int k = 0; k < 2 * n; ++k) {
      Eigen::VectorXd w(n);
      for (int i = 0; i < n; ++i) w[i] = rng.uniform(-2.0, 2.0);
      q.add_rank_one(w, rng.uniform(0.1, 1.0));
    }
    CurvOptions serial;
    serial.grid_res = 500;
    serial.exec = par::Exec::serial;
    CurvOptions parallel = serial;
    parallel.exec = par::Exec::parallel;
    const Metric id = Metric::Identity(n, n);
    const CurvatureReport a = max_on_sphere(q, id, serial);
    const CurvatureReport b = max_on_sphere(q, id, parallel);
    CHECK(a.psi_max == b.psi_max);
    CHECK(a.curv == b.curv);
    CHECK(a.gap == b.gap);
    CHECK((a.argmax - b.argmax).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("flat certificate identical across execution modes") {
  CascadeStart start = CascadeStart::clifford(4, 2, 5);
  const CascadeImmersion casc = cascade(start, {{0.1, 7, 2}, {0.07, 5, 3}});
  const FlatnessReport serial = certify_flat(casc, 4000, 1e-6, 9, par::Exec::serial);
  const FlatnessReport parallel =
      certify_flat(casc, 4000, 1e-6, 9, par::Exec::parallel);
  CHECK(serial.deviation == parallel.deviation);
  CHECK(serial.flat == parallel.flat);
}

TEST_CASE("thread cap from the environment is respected") {
  CHECK(par::max_threads() >= 1);
}
