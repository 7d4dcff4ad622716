#include "finsler/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace finsler::parallel {

namespace {
std::atomic<int> override_threads{0};

int env_threads() {
    const char* v = std::getenv("FINSLER_ISO_THREADS");
    if (!v || !*v) return 0;
    try {
        const int n = std::stoi(v);
        return n > 0 ? n : 0;
    } catch (...) {
        return 0;
    }
}
}  // namespace

int max_threads() {
    if (const int o = override_threads.load(); o > 0) return o;
    static const int from_env = env_threads();
    if (from_env > 0) return from_env;
    return omp_get_max_threads();
}

void set_max_threads(int n) { override_threads.store(n > 0 ? n : 0); }

}  // namespace finsler::parallel
