#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace hcforge {

// Worker count: HCFORGE_THREADS if set, otherwise hardware concurrency.
int worker_count();

// Test hook; 0 restores the environment-driven default.
void set_worker_count(int n);

// Runs fn(i) for i in [0, count) across workers. Tasks must be independent;
// callers that aggregate do so afterwards by index so results do not depend
// on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace hcforge
