#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

namespace apc {

// Neumaier-compensated accumulator. Used for mass bookkeeping where plain
// summation drift over ~1e5 steps would eat into the closure tolerance.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }

    void reset() { sum = comp = 0.0; }
};

// FNV-1a, 64 bit. Stable across platforms; used to stamp output metadata
// with the effective configuration.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Full-precision decimal formatting; %.17g round-trips any double.
inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Shortest decimal that round-trips. Used for config echoes, where exact
// values matter but %.17g noise would hurt readability.
std::string format_shortest(double v);

} // namespace apc
