#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rect/density.hpp"

namespace rect {

enum class Verdict { rectifiable_consistent, divergent, low_density, boundary_excluded };

const char* verdict_name(Verdict v);

// Finite-scale calibrations; both are config surface, never baked into the
// operators. tau is per-octave s2 growth, floor is the minimum finest-octave
// density below which no rectifiability verdict is issued.
struct ClassifierConfig {
    double slope_tau = 0.005;
    double density_floor = 0.05;
    int slope_window_octaves = 4;
};

struct PointVerdict {
    uint32_t point_id = 0;
    double s2 = 0.0;
    double slope = 0.0;
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    bool boundary = false;
    Verdict verdict = Verdict::rectifiable_consistent;
};

PointVerdict classify_point(uint32_t point_id, const DensityProfile& profile,
                            const SquareFunctionResult& sqfn, bool boundary,
                            const ScaleGrid& grid, const ClassifierConfig& config);

struct SummaryReport {
    size_t point_count = 0;
    std::map<std::string, double> fractions;  // per verdict, sums to 1
    double median_s2 = 0.0;
    double median_slope = 0.0;
    // condition-(c) statistic: median over points of max|Delta| on the finest
    // octave; reported, never a verdict by itself
    double median_max_delta_finest = 0.0;
    std::optional<double> accuracy;  // vs ground truth, non-excluded points
};

// labels[i]: true = rectifiable ground truth for verdicts[i]; empty -> no
// accuracy. max_delta_finest aligns with verdicts.
SummaryReport summarize(const std::vector<PointVerdict>& verdicts,
                        const std::vector<double>& max_delta_finest,
                        const std::vector<bool>& labels = {});

}  // namespace rect
