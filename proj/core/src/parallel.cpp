#include "ortho/parallel.hpp"

#include <Eigen/Core>
#include <charconv>
#include <cstdlib>
#include <cstring>

#ifdef ORTHO_HAVE_OPENMP
#include <omp.h>
#endif

namespace ortho {

void set_max_threads(int threads) {
  if (threads < 1) return;
#ifdef ORTHO_HAVE_OPENMP
  omp_set_num_threads(threads);
#endif
  Eigen::setNbThreads(threads);
}

int configure_threads_from_env() {
  const char* raw = std::getenv("ORTHO_THREADS");
  if (raw == nullptr) return 0;
  int value = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc() || ptr != end || value < 1) return 0;
  set_max_threads(value);
  return value;
}

int max_threads() {
#ifdef ORTHO_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace ortho
