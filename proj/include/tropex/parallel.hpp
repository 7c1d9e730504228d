#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace tropex {

// Chunked worker loop; all tasks write to disjoint slots.
inline void parallel_for(size_t count, int threads, const std::function<void(size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    size_t nw = std::min<size_t>(threads, count);
    std::vector<std::thread> pool;
    for (size_t w = 0; w < nw; ++w)
        pool.emplace_back([&, w] {
            for (size_t i = w; i < count; i += nw) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace tropex
