#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rect/diagnostics.hpp"

namespace rect {

// One run: measure -> grid -> per-point profiles/square functions -> verdicts
// -> summary. Fully reproducible from this config plus the measure file.
struct AnalysisConfig {
    int octaves = 8;
    int per_octave = 4;  // m
    double safety = 1.0;
    std::string eval = "all";  // all | random
    uint64_t eval_k = 500;
    uint64_t seed = 0;
    ClassifierConfig classifier;
    // profile CSV (with the Gaussian column) is emitted for at most this many
    // of the evaluation points; the Gaussian sum is a full support pass per
    // scale, so it does not belong on the hot path
    uint64_t profile_cap = 16;
};

struct PointRecord {
    uint32_t point_id = 0;
    DensityProfile profile;
    SquareFunctionResult sqfn;
    bool boundary = false;
};

struct AnalysisResult {
    ScaleGrid grid;
    double boundary_threshold = 0.0;
    std::vector<uint32_t> eval_ids;
    std::vector<PointRecord> records;
    std::vector<PointVerdict> verdicts;
    std::vector<double> max_delta_finest;
    SummaryReport summary;
};

// Distance of a point to the bounding-box faces along the measure's truncated
// axes; +inf when the generator declared no truncation.
double truncation_distance(const DiscreteMeasure& mu, const Box& bbox, Point x);

// Boundary rule used for classification: flagged when the truncation distance
// is below 2 * (top radius of the slope window), the largest scale a verdict
// reads.
double boundary_threshold_for(const ScaleGrid& grid, const ClassifierConfig& cfg);

AnalysisResult analyze(const DiscreteMeasure& mu, const AnalysisConfig& cfg);

// File emission (CSV + report JSON), formats per the external interfaces.
void write_profile_csv(const std::string& path, const DiscreteMeasure& mu,
                       const AnalysisResult& res, uint64_t cap);
void write_sqfn_csv(const std::string& path, const AnalysisResult& res);
void write_verdicts_csv(const std::string& path, const AnalysisResult& res);
void write_report_json(const std::string& path, const DiscreteMeasure& mu,
                       const AnalysisConfig& cfg, const AnalysisResult& res,
                       const std::string& measure_path);

// Flat key=value config file; unknown keys rejected. CLI flags override.
AnalysisConfig load_config_file(const std::string& path, AnalysisConfig base);

}  // namespace rect
