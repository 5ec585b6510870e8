#include "vplk/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

#include "vplk/errors.hpp"

namespace vplk {

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int n) {
    if (n < 1) throw PreconditionError("thread count must be >= 1");
    g_threads = n;
}

int num_threads() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t, int)>& body) {
    const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(g_threads.load()), n));
    if (workers <= 1) {
        if (n > 0) body(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t b = std::min(n, w * chunk);
        const std::size_t e = std::min(n, b + chunk);
        pool.emplace_back([&, b, e, w] {
            try {
                if (b < e) body(b, e, w);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace vplk
