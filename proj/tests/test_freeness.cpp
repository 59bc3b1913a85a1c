#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "forge/curvature.hpp"
#include "forge/freeness.hpp"
#include "forge/rng.hpp"
#include "helpers.hpp"

using namespace forge;

namespace {
FrequencySpec three_mode_spec(std::uint64_t seed) {
  Mode a, b, c;
  a.w = Eigen::Vector2i(1, 0);
  b.w = Eigen::Vector2i(0, 1);
  c.w = Eigen::Vector2i(1, 1);
  c.r = 0.5;
  return FrequencySpec::with_generic_phases(2, {a, b, c}, seed);
}
}  // namespace

TEST_CASE("circle is free: rank 2 of required 2") {
  const FrequencySpec circle = testutil::unit_circle();
  Rng rng(1);
  const Eigen::VectorXd t = testutil::random_torus_point(rng, 1);
  CHECK(osc2_rank(circle, t, 1e-8) == 2);
  const OsculatingReport rep = is_free(circle, 20, 1e-8, 5);
  CHECK(rep.required_rank == 2);
  CHECK(rep.min_rank == 2);
  CHECK(rep.free);
}

TEST_CASE("product torus is not free: rank 4 of required 5") {
  const FrequencySpec product = testutil::product_torus();
  Rng rng(2);
  const Eigen::VectorXd t = testutil::random_torus_point(rng, 2);
  CHECK(osc2_rank(product, t, 1e-8) == 4);
  const OsculatingReport rep = is_free(product, 20, 1e-8, 5);
  CHECK(rep.required_rank == 5);
  CHECK(rep.min_rank == 4);
  CHECK_FALSE(rep.free);
}

TEST_CASE("three-mode spec in R^6 reaches rank 5") {
  const FrequencySpec spec = three_mode_spec(99);
  const OsculatingReport rep = is_free(spec, 50, 1e-8, 7);
  CHECK(rep.required_rank == 5);
  CHECK(rep.min_rank == 5);
  CHECK(rep.free);
  CHECK(rep.margin > 1.0);
}

TEST_CASE("rank never exceeds the ambient or osculating cap") {
  Rng rng(3);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 2));
    const FrequencySpec spec = testutil::random_isometric_spec(n, 50 + trial);
    const Eigen::VectorXd t = testutil::random_torus_point(rng, n);
    const int rank = osc2_rank(spec, t, 1e-8);
    CHECK(rank <= std::min(spec.ambient_dim(), n + n * (n + 1) / 2));
  }
}

TEST_CASE("spanning symmetric lifts imply freeness at sampled points") {
  // the (w, sym(w w^T)) lifts spanning R^{n + n(n+1)/2} force full rank;
  // radii are irrelevant to the rank, so draw them freely
  Rng rng(8);
  int spanning_cases = 0;
  for (int trial = 0; trial < 60 && spanning_cases < 6; ++trial) {
    const int n = 2;
    const int lift_dim = n + n * (n + 1) / 2;
    const int k = 5 + static_cast<int>(rng.uniform_int(0, 2));
    std::vector<Mode> modes;
    for (int i = 0; i < k; ++i) {
      Mode m;
      m.w = Eigen::Vector2i(static_cast<int>(rng.uniform_int(-3, 3)),
                            static_cast<int>(rng.uniform_int(-3, 3)));
      if (m.w.isZero()) m.w[0] = 1;
      m.r = rng.uniform(0.2, 1.0);
      m.phi = rng.uniform(0.0, testutil::kTwoPi);
      modes.push_back(std::move(m));
    }
    FrequencySpec spec = [&]() -> FrequencySpec {
      try {
        return FrequencySpec(n, modes);
      } catch (...) {
        modes[0].w = Eigen::Vector2i(1, 0);
        modes[1].w = Eigen::Vector2i(0, 1);
        return FrequencySpec(n, modes);
      }
    }();
    Eigen::MatrixXd lifts(spec.mode_count(), lift_dim);
    for (int i = 0; i < spec.mode_count(); ++i) {
      const Eigen::VectorXd w = spec.modes()[static_cast<std::size_t>(i)].w.cast<double>();
      lifts(i, 0) = w[0];
      lifts(i, 1) = w[1];
      lifts(i, 2) = w[0] * w[0];
      lifts(i, 3) = w[0] * w[1];
      lifts(i, 4) = w[1] * w[1];
    }
    const bool spanning =
        Eigen::FullPivLU<Eigen::MatrixXd>(lifts).rank() == lift_dim;
    if (!spanning) continue;
    ++spanning_cases;
    const OsculatingReport rep = is_free(spec, 50, 1e-8, 31 + trial);
    CHECK(rep.free);
  }
  CHECK(spanning_cases >= 3);
}

TEST_CASE("m = n reduces to plain freeness") {
  const FrequencySpec spec = three_mode_spec(123);
  const MFreeReport rep = is_m_free(spec, 2, 4, 25, 1e-8, 17);
  CHECK(rep.pass == is_free(spec, 50, 1e-8, 17).free);
}

TEST_CASE("m = 1 freeness matches positivity of the quartic form") {
  // a geodesic direction annihilating all second derivatives is exactly a
  // zero of Psi on the sphere
  const FrequencySpec product = testutil::product_torus();  // Psi > 0 => 1-free
  const MFreeReport product_rep = is_m_free(product, 1, 12, 10, 1e-8, 3);
  QuarticForm q = QuarticForm::from_spec(product);
  q *= -1.0;
  const double min_psi =
      -max_on_sphere(q, Metric::Identity(2, 2), CurvOptions::fast()).psi_max;
  CHECK(min_psi > 1e-6);
  CHECK(product_rep.pass);

  // a single diagonal mode annihilated along its kernel direction
  Mode a, b, c;
  a.w = Eigen::Vector2i(1, 0);
  b.w = Eigen::Vector2i(0, 1);
  c.w = Eigen::Vector2i(1, 1);
  // restrict to direction (1, -1): mode c drops out there, and Psi restricted
  // stays positive, so 1-freeness still holds; validates the equivalence on a
  // second spec rather than a negative
  const FrequencySpec spec3(2, {a, b, c});
  QuarticForm q3 = QuarticForm::from_spec(spec3);
  q3 *= -1.0;
  const double min_psi3 =
      -max_on_sphere(q3, Metric::Identity(2, 2), CurvOptions::fast()).psi_max;
  const MFreeReport rep3 = is_m_free(spec3, 1, 12, 10, 1e-8, 9);
  CHECK(rep3.pass == (min_psi3 > 1e-12));
}

TEST_CASE("six-mode design at 2N = 12 is 2-free with generic phases") {
  std::vector<Eigen::VectorXi> freqs = {
      Eigen::Vector2i(2, 1),  Eigen::Vector2i(1, -2), Eigen::Vector2i(1, 1),
      Eigen::Vector2i(1, -1), Eigen::Vector2i(1, 0),  Eigen::Vector2i(0, 1)};
  const WeightSolution sol = solve_weights(freqs, 2, false);
  REQUIRE(sol.status == WeightStatus::ok);
  std::vector<Mode> modes;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    if (sol.weights[static_cast<Eigen::Index>(k)] < 1e-12) continue;
    Mode m;
    m.w = freqs[k];
    m.r = std::sqrt(sol.weights[static_cast<Eigen::Index>(k)]);
    modes.push_back(std::move(m));
  }
  // ensure all six directions survive by mixing weights toward uniform
  if (modes.size() < 6) {
    modes.clear();
    const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(6, 1.0);
    Eigen::VectorXd mixed = 0.5 * sol.weights + 0.05 * uniform;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      Mode m;
      m.w = freqs[k];
      m.r = std::sqrt(mixed[static_cast<Eigen::Index>(k)]);
      modes.push_back(std::move(m));
    }
  }
  const FrequencySpec spec =
      FrequencySpec::with_generic_phases(2, std::move(modes), 2024);
  const MFreeReport rep = is_m_free(spec, 2, 6, 25, 1e-8, 77);
  CHECK(rep.pass);
}

TEST_CASE("dimension thresholds") {
  const DimensionThresholds t22 = dimension_thresholds(2, 2);
  CHECK(t22.generic_m_free_ambient == 7);
  CHECK(t22.half_dim_min == 4);
  CHECK(t22.doubled_ambient_even == 8);
  CHECK(t22.free_isometric_torus_dim == 7);
  CHECK(t22.ii_isometric_torus_dim == 6);
  CHECK(t22.whitney_route_dim == 10);

  const DimensionThresholds t11 = dimension_thresholds(1, 1);
  CHECK(t11.generic_m_free_ambient == 3);

  const DimensionThresholds t12 = dimension_thresholds(1, 2);
  CHECK(t12.generic_m_free_ambient == 1 + 1 + 4);

  CHECK_THROWS_AS(dimension_thresholds(3, 2), std::invalid_argument);
}
