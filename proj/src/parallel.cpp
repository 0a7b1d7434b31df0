#include "isoprime/parallel.hpp"

#include <atomic>

namespace isoprime {

namespace {
std::atomic<unsigned> g_override{0};
}

void set_thread_count(unsigned n) { g_override.store(n); }

unsigned effective_threads() {
    unsigned n = g_override.load();
    return n == 0 ? thread_count() : n;
}

}  // namespace isoprime
