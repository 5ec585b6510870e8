#pragma once

#include <cstddef>
#include <functional>

namespace vplk {

void set_num_threads(int n);
int num_threads();

// Static contiguous partition of [0, n); chunk k always goes to worker k,
// so per-index results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t begin, std::size_t end, int worker)>& body);

}  // namespace vplk
