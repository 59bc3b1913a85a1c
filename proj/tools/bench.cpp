// Timing comparison of the serial and OpenMP paths of the data-parallel
// kernels: quartic sphere scans, flatness certification sampling, multistart
// ascent and the curvature-product sweep. Results must agree bitwise; the
// table reports wall time and speedup.

#include <chrono>
#include <cstdio>
#include <vector>

#include "forge/corrugation.hpp"
#include "forge/curvature.hpp"
#include "forge/design_search.hpp"
#include "forge/parallel.hpp"
#include "forge/rng.hpp"

using namespace forge;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

// best of two timed runs, after one warmup
template <class F>
double timed_ms(F&& f) {
  f();
  double best = 1e300;
  for (int rep = 0; rep < 2; ++rep) {
    const double t0 = now_ms();
    f();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

QuarticForm random_form(int n, std::uint64_t seed) {
  Rng rng(seed);
  QuarticForm q(n);
  for (int k = 0; k < 3 * n; ++k) {
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = rng.uniform(-2.0, 2.0);
    q.add_rank_one(w, rng.uniform(0.1, 1.0));
  }
  return q;
}

FrequencySpec random_isometric_spec(int n, std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0;; ++attempt) {
    std::vector<Eigen::VectorXi> freqs;
    const int k = n + 2 + static_cast<int>(rng.uniform_int(0, 3));
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXi w(n);
      bool zero = true;
      for (int c = 0; c < n; ++c) {
        w[c] = static_cast<int>(rng.uniform_int(-3, 3));
        zero = zero && w[c] == 0;
      }
      if (zero) w[0] = 1;
      freqs.push_back(w);
    }
    const WeightSolution sol = solve_weights(freqs, n, false);
    if (sol.status != WeightStatus::ok) continue;
    std::vector<Mode> modes;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      if (sol.weights[static_cast<Eigen::Index>(i)] < 1e-12) continue;
      Mode m;
      m.w = freqs[i];
      m.r = std::sqrt(sol.weights[static_cast<Eigen::Index>(i)]);
      m.phi = rng.uniform(0.0, 6.283185307179586);
      modes.push_back(std::move(m));
    }
    try {
      return FrequencySpec(n, std::move(modes));
    } catch (...) {
      continue;
    }
  }
}

struct Row {
  const char* name;
  double serial_ms;
  double parallel_ms;
  bool match;
};

void print_rows(const std::vector<Row>& rows) {
  std::printf("%-34s %12s %12s %9s %7s\n", "kernel", "serial (ms)",
              "openmp (ms)", "speedup", "match");
  for (const Row& r : rows) {
    std::printf("%-34s %12.1f %12.1f %8.2fx %7s\n", r.name, r.serial_ms,
                r.parallel_ms, r.serial_ms / r.parallel_ms,
                r.match ? "yes" : "NO");
  }
}

}  // namespace

int main() {
  par::init_from_env();
  std::printf("threads available: %d\n\n", par::max_threads());
  std::vector<Row> rows;

  {
    const QuarticForm q = random_form(3, 11);
    CurvOptions serial;
    serial.grid_res = 1500;
    serial.exec = par::Exec::serial;
    CurvOptions parallel = serial;
    parallel.exec = par::Exec::parallel;
    const Metric id = Metric::Identity(3, 3);

    CurvatureReport a, b;
    const double ts = timed_ms([&] { a = max_on_sphere(q, id, serial); });
    const double tp = timed_ms([&] { b = max_on_sphere(q, id, parallel); });
    rows.push_back({"sphere scan n=3 res=1500", ts, tp,
                    a.psi_max == b.psi_max && a.curv == b.curv});
  }

  {
    CascadeStart start = CascadeStart::clifford(5, 2, 42);
    std::vector<CorrugationStep> steps{{0.1, 7, 2}, {0.08, 5, 3}, {0.05, 9, 4}};
    const CascadeImmersion casc = cascade(start, steps);
    FlatnessReport a, b;
    const double ts = timed_ms(
        [&] { a = certify_flat(casc, 200000, 1e-6, 7, par::Exec::serial); });
    const double tp = timed_ms(
        [&] { b = certify_flat(casc, 200000, 1e-6, 7, par::Exec::parallel); });
    rows.push_back({"flat certificate 2e5 samples", ts, tp,
                    a.deviation == b.deviation});
  }

  {
    const QuarticForm q = random_form(6, 23);
    CurvOptions serial;
    serial.multistart = 512;
    serial.use_grid = false;
    serial.exec = par::Exec::serial;
    CurvOptions parallel = serial;
    parallel.exec = par::Exec::parallel;
    const Metric id = Metric::Identity(6, 6);
    CurvatureReport a, b;
    const double ts = timed_ms([&] { a = max_on_sphere(q, id, serial); });
    const double tp = timed_ms([&] { b = max_on_sphere(q, id, parallel); });
    rows.push_back({"multistart n=6 starts=512", ts, tp,
                    a.psi_max == b.psi_max});
  }

  {
    const int count = 200;
    std::vector<double> products_serial(count), products_parallel(count);
    const double ts = timed_ms([&] {
      CurvOptions opts = CurvOptions::fast();
      opts.exec = par::Exec::serial;
      for (int i = 0; i < count; ++i) {
        const FrequencySpec spec = random_isometric_spec(3, 1000 + i);
        products_serial[static_cast<std::size_t>(i)] =
            curv(spec, opts).curv * spec.enclosing_radius();
      }
    });
    const double tp = timed_ms([&] {
      par::for_each_index(static_cast<std::size_t>(count), [&](std::size_t i) {
        const FrequencySpec spec =
            random_isometric_spec(3, 1000 + static_cast<int>(i));
        CurvOptions inner = CurvOptions::fast();
        inner.exec = par::Exec::serial;  // outer loop carries the parallelism
        products_parallel[i] = curv(spec, inner).curv * spec.enclosing_radius();
      });
    });
    bool match = true;
    for (int i = 0; i < count; ++i)
      match = match && products_serial[static_cast<std::size_t>(i)] ==
                           products_parallel[static_cast<std::size_t>(i)];
    rows.push_back({"product sweep 200 specs n=3", ts, tp, match});
  }

  std::printf("\n");
  print_rows(rows);
  bool all = true;
  for (const Row& r : rows) all = all && r.match;
  return all ? 0 : 1;
}
