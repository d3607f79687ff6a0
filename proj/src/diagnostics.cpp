#include "rect/diagnostics.hpp"

#include <algorithm>

namespace rect {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::rectifiable_consistent:
            return "rectifiable-consistent";
        case Verdict::divergent:
            return "divergent";
        case Verdict::low_density:
            return "low-density";
        case Verdict::boundary_excluded:
            return "boundary-excluded";
    }
    return "?";
}

PointVerdict classify_point(uint32_t point_id, const DensityProfile& profile,
                            const SquareFunctionResult& sqfn, bool boundary,
                            const ScaleGrid& grid, const ClassifierConfig& config) {
    if (profile.entries.size() != grid.radii.size())
        throw ValidationError("classify_point: profile/grid mismatch");
    PointVerdict v;
    v.point_id = point_id;
    v.s2 = sqfn.s2;
    v.slope = divergence_slope(sqfn.s2_partial, config.slope_window_octaves);
    v.theta_lo = profile.theta_star_lower;
    v.theta_hi = profile.theta_star_upper;
    v.boundary = boundary;
    if (boundary)
        v.verdict = Verdict::boundary_excluded;
    else if (v.theta_lo < config.density_floor)
        v.verdict = Verdict::low_density;  // positive lower density is a hypothesis, not a finding
    else if (v.slope > config.slope_tau)
        v.verdict = Verdict::divergent;
    else
        v.verdict = Verdict::rectifiable_consistent;
    return v;
}

SummaryReport summarize(const std::vector<PointVerdict>& verdicts,
                        const std::vector<double>& max_delta_finest,
                        const std::vector<bool>& labels) {
    if (verdicts.empty()) throw ValidationError("summarize: no verdicts");
    SummaryReport rep;
    rep.point_count = verdicts.size();
    std::map<std::string, size_t> counts = {{"rectifiable-consistent", 0},
                                            {"divergent", 0},
                                            {"low-density", 0},
                                            {"boundary-excluded", 0}};
    std::vector<double> s2s, slopes;
    size_t matched = 0, judged = 0;
    for (size_t i = 0; i < verdicts.size(); ++i) {
        const PointVerdict& v = verdicts[i];
        ++counts[verdict_name(v.verdict)];
        if (v.verdict != Verdict::boundary_excluded) {
            s2s.push_back(v.s2);
            slopes.push_back(v.slope);
            if (!labels.empty()) {
                ++judged;
                const bool says_rectifiable = v.verdict == Verdict::rectifiable_consistent;
                const bool says_divergent = v.verdict == Verdict::divergent;
                if ((labels[i] && says_rectifiable) || (!labels[i] && says_divergent)) ++matched;
            }
        }
    }
    for (const auto& [k, c] : counts)
        rep.fractions[k] = static_cast<double>(c) / verdicts.size();
    rep.median_s2 = median_of(s2s);
    rep.median_slope = median_of(slopes);
    rep.median_max_delta_finest = median_of(std::vector<double>(max_delta_finest));
    if (!labels.empty() && judged > 0)
        rep.accuracy = static_cast<double>(matched) / judged;
    return rep;
}

}  // namespace rect
