#pragma once

#include <vector>

#include "rect/measure.hpp"
#include "rect/scale_grid.hpp"

namespace rect {

// theta(x,r) = mu(B(x,r)) / r^n.
double density_ratio(const DiscreteMeasure& mu, Point x, double r);

// Delta_mu(x,r) = theta(x,r) - theta(x,2r), both balls from the same index.
double delta(const DiscreteMeasure& mu, Point x, double r);

struct ProfileEntry {
    double r = 0.0;
    double theta = 0.0;
    double delta = 0.0;
};

// Per-point multiscale record; entries descend in r. The *_lower/upper pair
// are the finite-scale stand-ins for the lower/upper densities: min over the
// finest octave and max over all scales.
struct DensityProfile {
    std::vector<ProfileEntry> entries;
    double theta_star_lower = 0.0;
    double theta_star_upper = 0.0;
};

DensityProfile compute_profile(const DiscreteMeasure& mu, Point x, const ScaleGrid& grid);

struct DensityExtremes {
    double lo_finest = 0.0, hi_finest = 0.0;
    double lo_global = 0.0, hi_global = 0.0;
};

DensityExtremes density_extremes(const DiscreteMeasure& mu, Point x, const ScaleGrid& grid);
DensityExtremes extremes_of(const DensityProfile& profile, const ScaleGrid& grid);

struct SquareFunctionResult {
    double s2 = 0.0;
    std::vector<double> s2_partial;  // cumulative, one entry per full octave
    double smoothed_s2 = std::numeric_limits<double>::quiet_NaN();
};

// s2 = sum_k Delta(x, r_k)^2 * ln(2)/m over the weighted nodes; s2_partial
// accumulates octave by octave from the largest scale down. The Gaussian
// variant is opt-in (it costs a full pass over the support per scale).
SquareFunctionResult square_function(const DiscreteMeasure& mu, Point x, const ScaleGrid& grid,
                                     bool with_smoothed = false);
SquareFunctionResult square_function_from(const DensityProfile& profile, const ScaleGrid& grid);

// Mean per-octave increment of s2_partial over the trailing window (4 octaves
// when available). This is the divergence statistic the classifier reads.
double divergence_slope(const std::vector<double>& s2_partial, int window_octaves = 4);

// Gaussian-smoothed difference: phi_r*mu(x) - phi_{2r}*mu(x) with
// phi(x) = exp(-|x|^2), phi_r = r^-n phi(./r). Full sum, no truncation.
double smoothed_delta(const DiscreteMeasure& mu, Point x, double r);

// psi~_r(s) = 2 s^{n+1} r^{-(n+2)} exp(-s^2/r^2).
double kernel_psi(double s, double r, int n);

// Quadrature of int_0^inf Delta_mu(x,s) psi~_r(s) ds over a log-uniform grid
// on [r/100, 100r] (trapezoid in log s). Cross-validates smoothed_delta.
double smoothed_via_kernel(const DiscreteMeasure& mu, Point x, double r,
                           int nodes_per_octave = 64);

struct WindowSupBound {
    double sup_window = 0.0;  // sup over grid scales s <= sqrt(r)
    double sup_all = 0.0;     // sup over all grid scales
    double tail_factor = 0.0; // int_{r^-1/2}^inf 2 t^{n+1} e^{-t^2} dt
    double bound() const;     // Gamma(n/2+1)*sup_window + sup_all*tail_factor
    int n = 1;
};

// Split bound for |smoothed_delta(x,r)|, r < 1: the head term scans scales up
// to sqrt(r) (restricted to the active grid) and the tail is the incomplete
// Gamma factor.
WindowSupBound window_sup_bound(const DiscreteMeasure& mu, Point x, double r,
                                const ScaleGrid& grid);

// T nu (x) = ( sum_k |nu(B(x,r_k))/r_k^n - nu(B(x,2r_k))/(2r_k)^n|^2 lw )^1/2
// at each evaluation point. The caller picks a grid covering nu's structure.
std::vector<double> operator_T(const SignedMeasure& nu, const std::vector<Point>& eval_points,
                               const ScaleGrid& grid, int n);

// Empirical weak-(1,1) constant: sup over lambda of
// lambda * mu{ T nu > lambda } / ||nu||, with T nu evaluated at every support
// point of mu and the superlevel sets weighted by mu.
double weak_11_statistic(const DiscreteMeasure& mu, const SignedMeasure& nu,
                         const ScaleGrid& grid, const std::vector<double>& lambda_list);

// sum over support points x in B(center,R) of w(x) * sum_{r_k < R} Delta^2 lw.
double carleson_energy(const DiscreteMeasure& mu, Point center, double R, const ScaleGrid& grid);

struct AdAudit {
    double theta_min = 0.0, theta_max = 0.0;
    double c0 = 0.0;  // max(theta_max, 1/theta_min)
};

// Samples theta(x,r) over support points and r in [10h, diam/4]; the measure
// is AD-regular on the sampled window iff c0 is finite and moderate.
AdAudit ad_regularity_audit(const DiscreteMeasure& mu, int sample_points, int sample_radii,
                            uint64_t seed);

}  // namespace rect
