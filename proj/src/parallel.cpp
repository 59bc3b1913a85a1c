#include "forge/parallel.hpp"

#include <cstdlib>
#include <string>

namespace forge::par {

void init_from_env() {
#ifdef _OPENMP
  const char* env = std::getenv("FORGE_THREADS");
  if (!env) return;
  try {
    const int requested = std::stoi(env);
    if (requested >= 1 && requested < omp_get_max_threads())
      omp_set_num_threads(requested);
  } catch (...) {
    // ignore malformed values; OpenMP defaults apply
  }
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace forge::par
