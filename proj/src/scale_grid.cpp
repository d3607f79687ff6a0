#include "rect/scale_grid.hpp"

#include <cmath>

namespace rect {

ScaleGrid make_scale_grid_raw(double r_max, double r_min_request, int m) {
    if (m < 1) throw ValidationError("scale grid: scales per octave must be >= 1");
    if (!(r_max > 0.0) || !(r_min_request > 0.0) || r_min_request >= r_max)
        throw ValidationError("scale grid: need 0 < r_min < r_max");
    ScaleGrid g;
    g.per_octave = m;
    g.r_max = r_max;
    g.log_weight = std::log(2.0) / m;
    const double ratio = std::exp2(-1.0 / m);
    g.radii.push_back(r_max);
    // descend while the next node stays at or above the requested floor; the
    // 1e-12 slack keeps exact-octave requests from losing their last node to
    // rounding in the repeated multiplication
    while (g.radii.back() * ratio >= r_min_request * (1.0 - 1e-12))
        g.radii.push_back(g.radii.back() * ratio);
    if (g.radii.size() < 2)
        throw ValidationError("scale grid: empty range between r_min and r_max");
    g.r_min = g.radii.back();
    g.effective_octaves = static_cast<double>(g.weighted_count()) / m;
    return g;
}

ScaleGrid make_scale_grid(const DiscreteMeasure& mu, int octaves, int m, double safety) {
    if (octaves < 1) throw ValidationError("scale grid: octave count must be >= 1");
    if (!(safety >= 1.0)) throw ValidationError("scale grid: safety factor must be >= 1");
    const double diam = mu.diameter();
    if (!(diam > 0.0)) throw ValidationError("scale grid: support has zero diameter");
    const double r_max = diam / 4.0;
    const double floor_h = safety * 10.0 * mu.resolution();
    const double r_min_request = std::max(floor_h, r_max * std::exp2(-octaves));
    if (r_min_request >= r_max)
        throw ResolutionError("insufficient resolution: 10*safety*h = " + fmt17(floor_h) +
                              " reaches r_max = " + fmt17(r_max) +
                              " (h = " + fmt17(mu.resolution()) + ")");
    ScaleGrid g = make_scale_grid_raw(r_max, r_min_request, m);
    g.requested_octaves = octaves;
    return g;
}

}  // namespace rect
