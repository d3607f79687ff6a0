#pragma once

#include <string>
#include <vector>

#include "rect/measure.hpp"

namespace rect {

// Analytic profile for graph generators, defined on all of R^n (evaluation
// outside [0,L]^n is legal, which keeps central differences uniform at the
// domain edges). Only the first of the d-n extra coordinates is nonzero.
struct GraphProfile {
    enum class Kind { sinusoid, sawtooth, linear, zero };
    Kind kind = Kind::sinusoid;
    double amplitude = 0.1;
    double period = 1.0;
    double slope = 0.0;  // linear only

    double value(double u) const;
    double lipschitz_bound() const;
    static GraphProfile parse(const std::string& name, double amplitude, double period,
                              double slope);
};

// Regular n-grid of step s on [0,L]^n x {0}^{d-n}, weight s^n per node.
DiscreteMeasure gen_plane(int n, int d, double side_length, double grid_step);

// Graph measure (u, f(u)) with surface-measure weights
// sqrt(det(I + Df^T Df)) * s^n, Df by central differences at step s.
DiscreteMeasure gen_lipschitz_graph(int n, int d, const GraphProfile& profile, double side_length,
                                    double grid_step);

// N equally spaced atoms on the circle of radius R in R^2, weight 2*pi*R/N.
DiscreteMeasure gen_circle(double radius, uint64_t samples);

// Centers of the K-th generation squares of the four-corner Cantor
// construction on [0,1]^2, weight 4^-K each (total mass exactly 1).
DiscreteMeasure gen_cantor4(int depth, uint64_t point_budget = (1ull << 24));

DiscreteMeasure gen_mixture(const std::vector<DiscreteMeasure>& parts, int intrinsic_dim);

// Declarative generator spec (CLI + config surface). seed is recorded in the
// metadata; the bundled generators are all closed-form deterministic.
struct GeneratorSpec {
    std::string kind;  // plane | lipschitz_graph | circle | cantor4 | mixture
    int n = 1;
    int d = 2;
    double side_length = 1.0;
    double grid_step = 0.01;
    double radius = 1.0;
    uint64_t samples = 1000;
    int depth = 4;
    uint64_t point_budget = (1ull << 24);
    GraphProfile profile;
    std::vector<std::string> mixture_inputs;  // measure CSV paths
    uint64_t seed = 0;
};

DiscreteMeasure run_generator(const GeneratorSpec& spec);

}  // namespace rect
