#pragma once

#include <vector>

#include "rect/measure.hpp"

namespace rect {

// Normalized blowup T_{x,r}#mu: points mapped by y -> (y-x)/r, weights scaled
// by 1/mu(B(x,r)), restricted to B(0, window). Resolution becomes h/r.
struct Blowup {
    std::vector<double> base_point;
    double r = 0.0;
    double window = 5.0;
    double normalization = 0.0;  // mu(B(x,r))
    DiscreteMeasure measure;
};

Blowup blowup(const DiscreteMeasure& mu, Point x, double r, double window = 5.0);

struct FlatnessScore {
    double beta2 = 0.0;
    std::vector<double> plane_point;  // weighted barycenter of the window
    std::vector<double> basis;        // n x d row-major orthonormal spanning set
};

// Weighted-PCA plane through the barycenter; beta2 is the L2 distance of the
// unit-ball mass to that plane (the blowup is already normalized on B(0,1)).
FlatnessScore flatness_beta2(const Blowup& nu, int n);

struct UniformityScore {
    double c_fit = 0.0;        // median of nu(B(y,rho))/rho^n over the probes
    double max_rel_dev = 0.0;  // max |ratio - c_fit| / c_fit
};

// rho_lo <= 0 uses the default probe floor 10 * nu.h; probes span [rho_lo, 1].
UniformityScore uniformity_score(const Blowup& nu, int n, int probe_count, uint64_t seed,
                                 double rho_lo = 0.0);

struct TraceEntry {
    double r = 0.0;
    double beta2 = 0.0;
    double c_fit = 0.0;
    double max_rel_dev = 0.0;
};

struct BlowupTrace {
    std::vector<TraceEntry> entries;
    double beta2_slope = 0.0;  // least-squares slope of log beta2 vs log r
};

BlowupTrace blowup_trace(const DiscreteMeasure& mu, Point x, const std::vector<double>& radii,
                         double window = 5.0, int probe_count = 32, uint64_t seed = 0);

}  // namespace rect
