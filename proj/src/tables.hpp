#pragma once

#include <array>
#include <cassert>

namespace telefid::detail {

// Photon counts stay small (a few tens at the hardest truncations), so
// factorials and binomials live in fixed double tables. Entries above 18!
// carry the usual ~1e-16 relative rounding, far below every tolerance
// used in this project.
inline constexpr int kMaxCount = 64;

inline const std::array<double, kMaxCount + 1>& factorial_table() {
    static const auto table = [] {
        std::array<double, kMaxCount + 1> t{};
        t[0] = 1.0;
        for (int n = 1; n <= kMaxCount; ++n) t[n] = t[n - 1] * n;
        return t;
    }();
    return table;
}

inline double factorial(int n) {
    assert(n >= 0 && n <= kMaxCount);
    return factorial_table()[n];
}

inline double binomial(int n, int k) {
    assert(n >= 0 && n <= kMaxCount && k >= 0 && k <= n);
    static const auto table = [] {
        std::array<std::array<double, kMaxCount + 1>, kMaxCount + 1> t{};
        for (int n = 0; n <= kMaxCount; ++n) {
            t[n][0] = 1.0;
            for (int k = 1; k <= n; ++k)
                t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0.0);
        }
        return t;
    }();
    return table[n][k];
}

}  // namespace telefid::detail
