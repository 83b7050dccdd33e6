#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace rslab {

// Worker count resolution: RSLAB_THREADS env wins, then the explicit request,
// then hardware concurrency.  Zero or negative means "auto".
int resolve_threads(int requested);

// Number of fixed chunks used for parallel reductions.  The chunk layout
// never depends on the worker count, so reductions performed in chunk order
// are bit-identical for any number of threads.
inline constexpr std::uint64_t kReductionChunks = 128;

// Runs fn(chunk_index, begin, end) over n_chunks equal slices of [0, n_items).
// Chunks may execute on any worker; per-chunk results must be stored by
// chunk index and combined in chunk order by the caller.
template <typename Fn>
void for_chunks(std::uint64_t n_items, std::uint64_t n_chunks, int threads, Fn&& fn) {
    if (n_items == 0) return;
    if (n_chunks > n_items) n_chunks = n_items;
    int workers = resolve_threads(threads);
    if (static_cast<std::uint64_t>(workers) > n_chunks)
        workers = static_cast<int>(n_chunks);

    auto run_chunk = [&](std::uint64_t c) {
        std::uint64_t begin = n_items * c / n_chunks;
        std::uint64_t end = n_items * (c + 1) / n_chunks;
        fn(c, begin, end);
    };

    if (workers <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::uint64_t c = next.fetch_add(1);
                if (c >= n_chunks) break;
                run_chunk(c);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace rslab
