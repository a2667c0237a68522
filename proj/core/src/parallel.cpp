#include "suplab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace suplab {
namespace {

std::atomic<int> g_override{0};

int environment_workers() {
    if (const char* s = std::getenv("SUPLAB_WORKERS")) {
        try {
            const int n = std::stoi(s);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int default_workers() {
    const int n = g_override.load();
    return n > 0 ? n : environment_workers();
}

void set_default_workers(int n) { g_override.store(n > 0 ? n : 0); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int workers) {
    if (workers <= 0) workers = default_workers();
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::size_t> failed_at(w, std::numeric_limits<std::size_t>::max());
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        threads.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += w) {
                try {
                    body(i);
                } catch (...) {
                    failed_at[t] = i;
                    errors[t] = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : threads) th.join();
    const auto first = std::min_element(failed_at.begin(), failed_at.end());
    if (*first != std::numeric_limits<std::size_t>::max()) std::rethrow_exception(errors[first - failed_at.begin()]);
}

}  // namespace suplab
