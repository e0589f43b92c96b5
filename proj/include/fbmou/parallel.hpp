#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace fbmou {

/// Runs fn(begin, end) over fixed-size index blocks. Block boundaries do
/// not depend on the thread count, so workers writing disjoint blocks
/// produce bit-identical results for any degree of parallelism.
template <class F>
void parallel_blocks(int total, int block, int threads, F&& fn) {
    const int nblocks = (total + block - 1) / block;
    if (threads <= 1 || nblocks <= 1) {
        for (int b = 0; b < nblocks; ++b)
            fn(b * block, std::min((b + 1) * block, total));
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1))
            fn(b * block, std::min((b + 1) * block, total));
    };
    std::vector<std::thread> pool;
    const int nworkers = std::min(threads, nblocks);
    pool.reserve(nworkers);
    for (int w = 0; w < nworkers; ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
}

}  // namespace fbmou
