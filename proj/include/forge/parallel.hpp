#pragma once

#include <cstddef>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace forge::par {

enum class Exec { serial, parallel };

// Honors FORGE_THREADS; call once from main() of each executable.
void init_from_env();

int max_threads();

// Evaluates f(i) for i in [0, count). The parallel path distributes
// iterations over OpenMP threads; f must only write to per-index slots.
template <class F>
void for_each_index(std::size_t count, F&& f, Exec mode = Exec::parallel) {
#ifdef _OPENMP
  if (mode == Exec::parallel && count > 1) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(count); ++i)
      f(static_cast<std::size_t>(i));
    return;
  }
#endif
  (void)mode;
  for (std::size_t i = 0; i < count; ++i) f(i);
}

struct ScanBest {
  double value;
  std::size_t index;
};

// Argmax of f over [0, count); ties resolve to the lowest index, so the
// result is identical for the serial and parallel paths and for any thread
// count (no floating-point accumulation is involved).
template <class F>
ScanBest argmax_scan(std::size_t count, F&& f, Exec mode = Exec::parallel) {
  ScanBest best{-1.0 / 0.0, 0};
#ifdef _OPENMP
  if (mode == Exec::parallel && count > 1) {
    const int nt = max_threads();
#pragma omp parallel num_threads(nt)
    {
      ScanBest local{-1.0 / 0.0, 0};
#pragma omp for schedule(static) nowait
      for (long long i = 0; i < static_cast<long long>(count); ++i) {
        const double v = f(static_cast<std::size_t>(i));
        if (v > local.value ||
            (v == local.value && static_cast<std::size_t>(i) < local.index)) {
          local.value = v;
          local.index = static_cast<std::size_t>(i);
        }
      }
#pragma omp critical
      {
        if (local.value > best.value ||
            (local.value == best.value && local.index < best.index)) {
          best = local;
        }
      }
    }
    return best;
  }
#endif
  (void)mode;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = f(i);
    if (v > best.value) {
      best.value = v;
      best.index = i;
    }
  }
  return best;
}

}  // namespace forge::par
