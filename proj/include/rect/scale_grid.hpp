#pragma once

#include <vector>

#include "rect/measure.hpp"

namespace rect {

// Log-uniform radius grid discretizing integrals against dr/r. The radii
// array holds K+1 nodes descending from r_max with exact consecutive ratio
// 2^{-1/m}; the first K carry quadrature weight ln(2)/m each and the terminal
// node is the closing interval endpoint, so the weights sum to
// ln(r_max/r_min) by construction.
struct ScaleGrid {
    double r_max = 0.0;
    double r_min = 0.0;  // = radii.back()
    int per_octave = 4;  // m
    double log_weight = 0.0;
    std::vector<double> radii;
    int requested_octaves = 0;
    double effective_octaves = 0.0;

    int weighted_count() const { return static_cast<int>(radii.size()) - 1; }
    int octave_count() const { return weighted_count() / per_octave; }
};

// r_max = diam(supp)/4, r_min = max(safety*10*h, r_max*2^-octaves). If the
// resolution clamp truncates the requested octave range the effective count is
// recorded; if it leaves no room at all this throws ResolutionError naming h.
ScaleGrid make_scale_grid(const DiscreteMeasure& mu, int octaves, int m, double safety = 1.0);

// Same grid math for callers that know the range directly (blowups, tests).
ScaleGrid make_scale_grid_raw(double r_max, double r_min_request, int m);

}  // namespace rect
