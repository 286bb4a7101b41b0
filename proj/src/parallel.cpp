#include "exlab/parallel.hpp"

namespace exlab {

namespace {
int g_threads = 0;
}

void set_default_threads(int n) { g_threads = n; }

int default_threads() {
  if (g_threads > 0) return g_threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

}  // namespace exlab
