#include "rect/common.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <thread>

namespace rect {

std::vector<uint32_t> Rng::sample_indices(uint64_t n, uint64_t k) {
    if (k >= n) {
        std::vector<uint32_t> all(n);
        for (uint64_t i = 0; i < n; ++i) all[i] = static_cast<uint32_t>(i);
        return all;
    }
    // Floyd's algorithm, then sort for a stable evaluation order.
    std::vector<uint32_t> out;
    out.reserve(k);
    std::vector<bool> seen(n, false);
    for (uint64_t j = n - k; j < n; ++j) {
        uint64_t t = below(j + 1);
        if (seen[t]) t = j;
        seen[t] = true;
        out.push_back(static_cast<uint32_t>(t));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {
int thread_cap() {
    if (const char* env = std::getenv("RECT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}
}  // namespace

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    const int workers = std::min<size_t>(thread_cap(), n);
    if (workers <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace rect
