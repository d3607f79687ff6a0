#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rect/measure.hpp"

namespace rect {

// True cube (axis-aligned, closed) in R^d, as opposed to lattice cubes.
struct TrueCube {
    std::vector<double> center;
    double side = 0.0;

    bool contains(Point p, double dilation = 1.0) const {
        const double half = 0.5 * dilation * side;
        for (size_t a = 0; a < center.size(); ++a)
            if (std::abs(p[a] - center[a]) > half) return false;
        return true;
    }
    Box box(double dilation = 1.0) const {
        Box b;
        const double half = 0.5 * dilation * side;
        b.lo.resize(center.size());
        b.hi.resize(center.size());
        for (size_t a = 0; a < center.size(); ++a) {
            b.lo[a] = center[a] - half;
            b.hi[a] = center[a] + half;
        }
        return b;
    }
};

// Level-lambda splitting of nu against mu: cubes Q_j with controlled
// concentration, good density f = dnu/dmu off their union, and localized
// mean-zero bad pieces beta_j = w_j nu - b_j mu supported on R_j = 6 Q_j.
struct CZDecomposition {
    double lambda = 0.0;
    std::vector<TrueCube> cubes;
    // per-cube data
    std::vector<double> wj_nu_integral;        // int w_j dnu
    std::vector<double> bj_value;              // b_j = bj_value on R_j cap supp(mu)
    std::vector<double> mu_Rj;                 // mu(6Q_j)
    std::vector<double> nu_abs_Qj;             // |nu|(Q_j)
    std::vector<std::vector<uint32_t>> Rj_support;  // mu-point ids in R_j
    // per-support-point data
    std::vector<int> overlap;        // #cubes containing the point
    std::vector<double> f_good;      // dnu/dmu outside the union, 0 inside
    std::vector<double> g_weight;    // g such that nu = g mu + sum beta_j
    std::vector<double> nu_weight;   // signed nu mass sitting on each mu point
};

struct AuditClause {
    std::string id;
    bool pass = false;
    double constant = 0.0;
    std::string witness;
};

struct AuditReport {
    std::vector<AuditClause> clauses;
    bool all_pass = true;
    std::string to_json() const;
};

struct CzParams {
    std::vector<double> eta_set = {2.5, 3.0, 4.0, 8.0, 16.0};
    double rel_tol = 1e-12;
};

// Constructs the decomposition. Preconditions: lambda above the hypothesis
// bound 2^{d+1} ||nu|| / ||mu||, and every nu atom sits exactly on a mu
// support point.
CZDecomposition cz_decompose(const SignedMeasure& nu, const DiscreteMeasure& mu, double lambda,
                             const CzParams& params = {});

// Measures each clause; reports, never throws.
AuditReport cz_audit(const CZDecomposition& dec, const SignedMeasure& nu,
                     const DiscreteMeasure& mu, const CzParams& params = {});

}  // namespace rect
