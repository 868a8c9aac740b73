#include "subic/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace subic::par {

namespace {
Mode g_mode = Mode::openmp;
int g_threads = 0;
}  // namespace

void set_mode(Mode m) { g_mode = m; }

Mode mode() {
#ifdef _OPENMP
  return g_mode;
#else
  return Mode::serial;
#endif
}

void set_threads(int t) {
  g_threads = t < 0 ? 0 : t;
#ifdef _OPENMP
  if (g_threads > 0) omp_set_num_threads(g_threads);
#endif
}

int threads() { return g_threads; }

}  // namespace subic::par
