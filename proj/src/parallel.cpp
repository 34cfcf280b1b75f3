#include "orlicz/parallel.hpp"

#include <cstdlib>

namespace orlicz {

unsigned worker_count() {
    if (const char* env = std::getenv("ORLICZ_LAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace orlicz
