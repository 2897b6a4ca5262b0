#include "prony/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace prony {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned count) { g_max_threads = count; }

unsigned max_threads()
{
    unsigned cap = g_max_threads.load();
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return cap == 0 ? hw : std::min(cap, hw);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body)
{
    if (count == 0) {
        return;
    }
    // small jobs are not worth a thread
    const std::size_t workers = std::min<std::size_t>(max_threads(), (count + 255) / 256);
    if (workers <= 1) {
        body(0, count);
        return;
    }
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& th : pool) {
        th.join();
    }
}

} // namespace prony
