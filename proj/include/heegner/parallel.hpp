#ifndef HEEGNER_PARALLEL_HPP
#define HEEGNER_PARALLEL_HPP

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace heegner {

// index-ordered result slots, so output is identical for any worker count
inline void parallel_for(size_t n, unsigned workers, const std::function<void(size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (size_t i = 0; i < n; i++) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    unsigned count = std::min<size_t>(workers, n);
    for (unsigned w = 0; w < count; w++) {
        pool.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace heegner

#endif
