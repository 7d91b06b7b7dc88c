#include "resrwa/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace resrwa {

namespace {
std::atomic<int> g_thread_limit{0};
}

void set_thread_limit(int threads) { g_thread_limit.store(threads > 0 ? threads : 0); }

int thread_limit() { return g_thread_limit.load(); }

int apply_thread_limit_from_env() {
    const char* raw = std::getenv("RWA_THREADS");
    int value = 0;
    if (raw) {
        const auto [ptr, ec] = std::from_chars(raw, raw + std::strlen(raw), value);
        if (ec != std::errc() || value < 0) value = 0;
    }
    set_thread_limit(value);
    return value;
}

int effective_threads() {
#ifdef _OPENMP
    const int available = omp_get_max_threads();
#else
    const int available = 1;
#endif
    const int cap = thread_limit();
    return cap > 0 && cap < available ? cap : available;
}

}  // namespace resrwa
