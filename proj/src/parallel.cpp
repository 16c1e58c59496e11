#include "diracsea/parallel.hpp"

#include <atomic>

namespace diracsea {

namespace {
std::atomic<unsigned> g_threads{1};
}

unsigned default_threads() { return g_threads.load(); }
void set_default_threads(unsigned n) { g_threads.store(n == 0 ? 1 : n); }

}  // namespace diracsea
