#include "samplesort/thread_pool.hpp"

#include <thread>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace samplesort {

struct ThreadPool::Arena {
    explicit Arena(unsigned workers)
        : limit(tbb::global_control::max_allowed_parallelism, workers),
          arena(static_cast<int>(workers)) {}

    tbb::global_control limit;
    tbb::task_arena arena;
};

ThreadPool::ThreadPool(unsigned workers)
    : workers_(resolve_workers(workers)),
      arena_(std::make_unique<Arena>(workers_)) {}

ThreadPool::~ThreadPool() = default;

unsigned ThreadPool::resolve_workers(unsigned requested) noexcept {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void ThreadPool::parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    arena_->arena.execute([&] {
        tbb::parallel_for(tbb::blocked_range<std::size_t>(0, count, 1),
                          [&](const tbb::blocked_range<std::size_t>& r) {
                              for (std::size_t i = r.begin(); i != r.end(); ++i) body(i);
                          });
    });
}

} // namespace samplesort
