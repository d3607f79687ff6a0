#include "rect/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace rect {

double truncation_distance(const DiscreteMeasure& mu, const Box& bbox, Point x) {
    const auto& axes = mu.meta().truncated_axes;
    if (axes.empty()) return std::numeric_limits<double>::infinity();
    double dist = std::numeric_limits<double>::infinity();
    for (int a : axes) {
        dist = std::min(dist, x[a] - bbox.lo[a]);
        dist = std::min(dist, bbox.hi[a] - x[a]);
    }
    return dist;
}

double boundary_threshold_for(const ScaleGrid& grid, const ClassifierConfig& cfg) {
    const int oct = grid.octave_count();
    const int above = std::max(oct - cfg.slope_window_octaves, 0);
    return 2.0 * grid.r_max * std::exp2(static_cast<double>(-above));
}

AnalysisResult analyze(const DiscreteMeasure& mu, const AnalysisConfig& cfg) {
    if (mu.size() == 0) throw ValidationError("analyze: empty measure");
    AnalysisResult res;
    res.grid = make_scale_grid(mu, cfg.octaves, cfg.per_octave, cfg.safety);
    res.boundary_threshold = boundary_threshold_for(res.grid, cfg.classifier);

    if (cfg.eval == "all") {
        res.eval_ids.resize(mu.size());
        for (size_t i = 0; i < mu.size(); ++i) res.eval_ids[i] = static_cast<uint32_t>(i);
    } else if (cfg.eval == "random") {
        Rng rng(cfg.seed);
        res.eval_ids = rng.sample_indices(mu.size(), cfg.eval_k);
    } else {
        throw ValidationError("analyze: eval mode must be 'all' or 'random'");
    }

    const Box bbox = mu.bounding_box();
    const size_t n = res.eval_ids.size();
    res.records.resize(n);
    parallel_for(n, [&](size_t i) {
        const uint32_t id = res.eval_ids[i];
        PointRecord rec;
        rec.point_id = id;
        rec.profile = compute_profile(mu, mu.point(id), res.grid);
        rec.sqfn = square_function_from(rec.profile, res.grid);
        rec.boundary =
            truncation_distance(mu, bbox, mu.point(id)) < res.boundary_threshold;
        res.records[i] = std::move(rec);
    });

    res.verdicts.reserve(n);
    res.max_delta_finest.reserve(n);
    for (const auto& rec : res.records) {
        res.verdicts.push_back(classify_point(rec.point_id, rec.profile, rec.sqfn, rec.boundary,
                                              res.grid, cfg.classifier));
        const size_t total = rec.profile.entries.size();
        const size_t fin_begin = total > static_cast<size_t>(res.grid.per_octave) + 1
                                     ? total - res.grid.per_octave - 1
                                     : 0;
        double mx = 0.0;
        for (size_t k = fin_begin; k < total; ++k)
            mx = std::max(mx, std::abs(rec.profile.entries[k].delta));
        res.max_delta_finest.push_back(mx);
    }

    std::vector<bool> labels;
    const Metadata& meta = mu.meta();
    if (!meta.components.empty()) {
        labels.resize(n);
        for (size_t i = 0; i < n; ++i) {
            bool lab = true;
            for (const auto& c : meta.components) {
                if (res.eval_ids[i] >= c.first && res.eval_ids[i] < c.first + c.count)
                    lab = c.rectifiable;
            }
            labels[i] = lab;
        }
    } else if (meta.rectifiable) {
        labels.assign(n, *meta.rectifiable);
    }
    res.summary = summarize(res.verdicts, res.max_delta_finest, labels);
    return res;
}

void write_profile_csv(const std::string& path, const DiscreteMeasure& mu,
                       const AnalysisResult& res, uint64_t cap) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write '" + path + "'");
    os << "point_id,r,theta,delta,smoothed_delta\n";
    const uint64_t count = std::min<uint64_t>(cap, res.records.size());
    for (uint64_t i = 0; i < count; ++i) {
        const auto& rec = res.records[i];
        for (const auto& e : rec.profile.entries) {
            const double sd = smoothed_delta(mu, mu.point(rec.point_id), e.r);
            os << rec.point_id << ',' << fmt17(e.r) << ',' << fmt17(e.theta) << ','
               << fmt17(e.delta) << ',' << fmt17(sd) << '\n';
        }
    }
}

void write_sqfn_csv(const std::string& path, const AnalysisResult& res) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write '" + path + "'");
    os << "point_id,s2,slope,theta_lo,theta_hi,boundary\n";
    for (const auto& v : res.verdicts) {
        os << v.point_id << ',' << fmt17(v.s2) << ',' << fmt17(v.slope) << ','
           << fmt17(v.theta_lo) << ',' << fmt17(v.theta_hi) << ',' << (v.boundary ? 1 : 0)
           << '\n';
    }
}

void write_verdicts_csv(const std::string& path, const AnalysisResult& res) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write '" + path + "'");
    os << "point_id,verdict,s2,slope,theta_lo,theta_hi,boundary\n";
    for (const auto& v : res.verdicts) {
        os << v.point_id << ',' << verdict_name(v.verdict) << ',' << fmt17(v.s2) << ','
           << fmt17(v.slope) << ',' << fmt17(v.theta_lo) << ',' << fmt17(v.theta_hi) << ','
           << (v.boundary ? 1 : 0) << '\n';
    }
}

void write_report_json(const std::string& path, const DiscreteMeasure& mu,
                       const AnalysisConfig& cfg, const AnalysisResult& res,
                       const std::string& measure_path) {
    nlohmann::ordered_json j;
    j["measure"] = {{"file", measure_path},
                    {"generator", mu.meta().generator},
                    {"d", mu.dim()},
                    {"n", mu.intrinsic_dim()},
                    {"h", mu.resolution()},
                    {"points", mu.size()},
                    {"total_mass", mu.total_mass()}};
    j["config"] = {{"octaves", cfg.octaves},
                   {"m", cfg.per_octave},
                   {"safety", cfg.safety},
                   {"eval", cfg.eval},
                   {"eval_k", cfg.eval_k},
                   {"seed", cfg.seed},
                   {"tau", cfg.classifier.slope_tau},
                   {"floor", cfg.classifier.density_floor},
                   {"tau_floor_are_calibrations", true}};
    j["grid"] = {{"r_max", res.grid.r_max},
                 {"r_min", res.grid.r_min},
                 {"effective_octaves", res.grid.effective_octaves},
                 {"boundary_threshold", res.boundary_threshold}};
    nlohmann::ordered_json fr;
    for (const auto& [k, v] : res.summary.fractions) fr[k] = v;
    j["fractions"] = fr;
    j["medians"] = {{"s2", res.summary.median_s2},
                    {"slope", res.summary.median_slope},
                    {"max_delta_finest", res.summary.median_max_delta_finest}};
    j["scales_note"] = "statistics hold along tested scales only";
    if (res.summary.accuracy) j["accuracy"] = *res.summary.accuracy;
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write '" + path + "'");
    os << j.dump(2) << '\n';
}

AnalysisConfig load_config_file(const std::string& path, AnalysisConfig base) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r\n");
            const auto e = s.find_last_not_of(" \t\r\n");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "octaves")
            base.octaves = std::stoi(val);
        else if (key == "m")
            base.per_octave = std::stoi(val);
        else if (key == "safety")
            base.safety = std::stod(val);
        else if (key == "eval")
            base.eval = val;
        else if (key == "eval_k")
            base.eval_k = std::stoull(val);
        else if (key == "seed")
            base.seed = std::stoull(val);
        else if (key == "tau")
            base.classifier.slope_tau = std::stod(val);
        else if (key == "floor")
            base.classifier.density_floor = std::stod(val);
        else if (key == "profile_cap")
            base.profile_cap = std::stoull(val);
        else
            throw ValidationError("config line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
    }
    return base;
}

}  // namespace rect
