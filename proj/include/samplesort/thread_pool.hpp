#pragma once

#include <cstddef>
#include <functional>
#include <memory>

namespace samplesort {

/// Bounded set of workers for bulk-synchronous loops, backed by a TBB arena.
/// The calling thread participates.
class ThreadPool {
public:
    explicit ThreadPool(unsigned workers);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    unsigned size() const noexcept { return workers_; }

    /// Calls body(i) for every i in [0, count) and returns once all calls
    /// finished. An exception thrown by a body is rethrown here.
    void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

    /// 0 maps to std::thread::hardware_concurrency() (at least 1).
    static unsigned resolve_workers(unsigned requested) noexcept;

private:
    struct Arena;

    unsigned workers_;
    std::unique_ptr<Arena> arena_;
};

/// Serial fallback when pool is null.
template <class F>
void parallel_for(ThreadPool* pool, std::size_t count, F&& body) {
    if (pool == nullptr || pool->size() == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::function<void(std::size_t)> fn = std::forward<F>(body);
    pool->parallel_for(count, fn);
}

} // namespace samplesort
