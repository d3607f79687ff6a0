#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rect {

// Error taxonomy shared by the library and the CLI exit-code contract:
// validation -> 2, audit failure -> 3, resolution -> 4.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class ResolutionError : public std::runtime_error {
public:
    explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

using Point = std::span<const double>;

inline double dist2(Point a, Point b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

// Deterministic, platform-independent RNG. std::mt19937_64 is portable but the
// standard distributions are not; these helpers are fully pinned.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        // splitmix64
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    uint64_t below(uint64_t n) { return n ? next() % n : 0; }

    // k distinct indices from [0,n), ascending (deterministic reservoir-free pick).
    std::vector<uint32_t> sample_indices(uint64_t n, uint64_t k);

private:
    uint64_t state_;
};

// Formats a double with 17 significant digits (round-trip safe); used by every
// CSV/JSON writer so reruns are byte-identical.
std::string fmt17(double v);

// Runs fn(i) for i in [0,n). Worker count is capped by the RECT_THREADS
// environment variable (0/1 or unset-on-small-n means serial). Results must be
// written to per-index slots; chunking is static so scheduling is deterministic.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

double median_of(std::vector<double> v);

}  // namespace rect
