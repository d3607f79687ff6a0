#pragma once

#include <cmath>

namespace rect {

// Gamma(k/2 + 1) by the half-integer recursion, exact up to rounding.
// k is the intrinsic dimension, so only small nonnegative integers occur.
inline double gamma_half_plus_one(int k) {
    // k even: Gamma(k/2+1) = (k/2)!  ; k odd: Gamma(k/2+1) = (k/2)(k/2-1)...(1/2)sqrt(pi)
    double v;
    int steps;
    if (k % 2 == 0) {
        v = 1.0;  // Gamma(1)
        steps = k / 2;
        for (int i = 1; i <= steps; ++i) v *= i;
    } else {
        v = std::sqrt(M_PI);  // Gamma(1/2)
        double x = 0.5;
        while (x < k / 2.0 + 1.0 - 0.25) {
            v *= x;
            x += 1.0;
        }
    }
    return v;
}

// Upper incomplete Gamma(k/2 + 1, a), again via the half-integer recursion
//   Gamma(s+1, a) = s*Gamma(s, a) + a^s e^{-a},
// anchored at Gamma(1, a) = e^{-a} and Gamma(1/2, a) = sqrt(pi)*erfc(sqrt(a)).
inline double upper_gamma_half_plus_one(int k, double a) {
    double s, g;
    if (k % 2 == 0) {
        s = 1.0;
        g = std::exp(-a);
    } else {
        s = 0.5;
        g = std::sqrt(M_PI) * std::erfc(std::sqrt(a));
    }
    while (s < k / 2.0 + 1.0 - 0.25) {
        g = s * g + std::pow(a, s) * std::exp(-a);
        s += 1.0;
    }
    return g;
}

// Tail integral int_lambda^inf 2 t^{n+1} e^{-t^2} dt = Gamma(n/2+1, lambda^2).
inline double gaussian_moment_tail(int n, double lambda) {
    return upper_gamma_half_plus_one(n, lambda * lambda);
}

}  // namespace rect
