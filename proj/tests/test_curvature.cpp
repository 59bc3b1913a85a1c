#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "forge/curvature.hpp"
#include "forge/rng.hpp"
#include "helpers.hpp"

using namespace forge;

namespace {
QuarticForm coordinate_quartic(int n, double scale = 1.0) {
  QuarticForm q(n);
  for (int i = 0; i < n; ++i) q.set_coefficient(i, i, i, i, scale);
  return q;
}

CurvOptions quick() {
  CurvOptions o;
  o.grid_res = 600;
  return o;
}
}  // namespace

TEST_CASE("max of u1^4 + u2^4 on the circle, tie broken to e1") {
  const CurvatureReport rep =
      max_on_sphere(coordinate_quartic(2), Metric::Identity(2, 2), quick());
  CHECK(rep.psi_max == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.argmax[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(rep.argmax[1]) < 1e-6);
}

TEST_CASE("isotropic form is constant on the sphere") {
  const QuarticForm q = QuarticForm::norm4(2);
  const CurvatureReport rep = max_on_sphere(q, Metric::Identity(2, 2), quick());
  CHECK(rep.psi_max == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.gap < 1e-9);
}

TEST_CASE("scaled coordinate form attains N") {
  for (int n : {2, 3}) {
    const QuarticForm q = coordinate_quartic(n, static_cast<double>(n));
    const CurvatureReport rep = max_on_sphere(q, Metric::Identity(n, n), quick());
    CHECK(rep.psi_max == doctest::Approx(static_cast<double>(n)).epsilon(1e-10));
  }
}

TEST_CASE("non positive definite metric is rejected") {
  Metric g = Metric::Identity(2, 2);
  g(1, 1) = -1.0;
  CHECK_THROWS_AS(max_on_sphere(coordinate_quartic(2), g, quick()),
                  std::invalid_argument);
}

TEST_CASE("curv of basic specs") {
  CHECK(curv(testutil::unit_circle(), quick()).curv ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(curv(testutil::product_torus(), quick()).curv ==
        doctest::Approx(1.0).epsilon(1e-10));
  // compressed circle: radii halve, frequency doubles, curvature doubles
  const FrequencySpec half = testutil::unit_circle().homothety_compress(2.0, 2);
  CHECK(curv(half, quick()).curv == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("normalized product of N circles yields curvature sqrt(N)") {
  for (int n : {2, 3}) {
    std::vector<Mode> modes;
    for (int k = 0; k < n; ++k) {
      Mode m;
      m.w = Eigen::VectorXi::Unit(n, k);
      m.r = 1.0 / std::sqrt(static_cast<double>(n));
      modes.push_back(m);
    }
    const FrequencySpec spec(n, std::move(modes));
    const CurvatureReport rep = curv(spec, quick());
    CHECK(rep.curv == doctest::Approx(std::sqrt(static_cast<double>(n)))
                          .epsilon(1e-10));
    CHECK(rep.curv * spec.enclosing_radius() ==
          doctest::Approx(std::sqrt(static_cast<double>(n))).epsilon(1e-10));
  }
}

TEST_CASE("argmax is G-unit within 1e-10 and attains psi_max") {
  Rng rng(4);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 1));
    const FrequencySpec spec = testutil::random_isometric_spec(n, 600 + trial);
    const QuarticForm q = QuarticForm::from_spec(spec);
    const Metric g = spec.induced_metric();
    const CurvatureReport rep = max_on_sphere(q, g, quick());
    CHECK(std::abs(rep.argmax.dot(g * rep.argmax) - 1.0) < 1e-10);
    CHECK(q(rep.argmax) == doctest::Approx(rep.psi_max)
                               .epsilon(std::max(1e-9, rep.gap)));
  }
}

TEST_CASE("multistart agrees with the grid oracle") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + (trial % 2);
    QuarticForm q(n);
    for (int k = 0; k < 2 * n + 1; ++k) {
      Eigen::VectorXd w(n);
      for (int i = 0; i < n; ++i) w[i] = rng.uniform(-2.0, 2.0);
      q.add_rank_one(w, rng.uniform(0.05, 1.0));
    }
    CurvOptions opts = quick();
    const CurvatureReport rep = max_on_sphere(q, Metric::Identity(n, n), opts);
    CHECK(rep.gap < 1e-6);
  }
}

TEST_CASE("curvature product check on closed forms") {
  const PetruninReport circle = petrunin_product_check(testutil::unit_circle(), quick());
  CHECK(circle.bound == doctest::Approx(1.0));
  CHECK(circle.product == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(circle.pass);

  const PetruninReport product =
      petrunin_product_check(testutil::product_torus(), quick());
  CHECK(product.bound == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
  CHECK(product.product == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(product.pass);

  // non-isometric specs are rejected
  Mode big;
  big.w = Eigen::VectorXi::Ones(1);
  big.r = 2.0;
  const FrequencySpec scaled(1, {big});
  CHECK_THROWS_AS(petrunin_product_check(scaled, quick()),
                  std::invalid_argument);
}

TEST_CASE("product inequality holds on seeded random isometric specs") {
  for (int n : {1, 2, 3}) {
    const double bound = petrunin_bound(n);
    for (int trial = 0; trial < 25; ++trial) {
      const FrequencySpec spec =
          testutil::random_isometric_spec(n, 7000 + 100 * n + trial);
      const PetruninReport rep = petrunin_product_check(spec, CurvOptions::fast());
      CHECK(rep.product >= bound - 1e-6);
    }
  }
}

TEST_CASE("homothety scales curvature exactly") {
  Rng rng(15);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 2));
    const FrequencySpec spec = testutil::random_isometric_spec(n, 880 + trial);
    const double base = curv(spec, quick()).curv;
    for (const auto [i, j] : {std::pair{2.0, 1}, {3.0, 2}, {10.0, 5}}) {
      const double compressed = curv(spec.homothety_compress(i, j), quick()).curv;
      CHECK(compressed == doctest::Approx(i * base).epsilon(1e-8));
    }
  }
}

TEST_CASE("isotropy defect closed forms") {
  CHECK(isotropy_defect(QuarticForm::norm4(2), quick()) ==
        doctest::Approx(0.0).epsilon(1e-9));
  // u1^4 + u2^4 ranges over [1/2, 1]: best center 3/4, defect 1/4
  CHECK(isotropy_defect(coordinate_quartic(2), quick()) ==
        doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("zero isotropy defect forces max equal min") {
  QuarticForm q = QuarticForm::norm4(3);
  q *= 2.5;
  const double defect = isotropy_defect(q, quick());
  CHECK(defect < 1e-8);
  const CurvatureReport maxrep = max_on_sphere(q, Metric::Identity(3, 3), quick());
  QuarticForm neg = q;
  neg *= -1.0;
  const double minval =
      -max_on_sphere(neg, Metric::Identity(3, 3), quick()).psi_max;
  CHECK(std::abs(maxrep.psi_max - minval) < 1e-8);
}
