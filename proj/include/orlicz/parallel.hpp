#ifndef ORLICZ_PARALLEL_HPP
#define ORLICZ_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace orlicz {

// Worker count: ORLICZ_LAB_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// out[i] = fn(i) for i in [0, count). Results land in index order regardless
// of scheduling; the first exception thrown by any worker is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
    std::vector<T> out(count);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (!err) err = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

} // namespace orlicz

#endif
