#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "rect/cz.hpp"
#include "rect/generators.hpp"
#include "rect/io.hpp"
#include "rect/pipeline.hpp"
#include "rect/tangent.hpp"

namespace fs = std::filesystem;
using namespace rect;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitAuditFail = 3;
constexpr int kExitResolution = 4;

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

std::vector<std::string> parse_strings(const std::string& csv) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(csv.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

void write_sparkline_svg(const std::string& path, const std::vector<TraceEntry>& entries) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot write '" + path + "'");
    const double W = 240.0, H = 60.0, pad = 4.0;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& e : entries) {
        const double lx = std::log10(e.r), ly = std::log10(std::max(e.beta2, 1e-300));
        xlo = std::min(xlo, lx);
        xhi = std::max(xhi, lx);
        ylo = std::min(ylo, ly);
        yhi = std::max(yhi, ly);
    }
    if (xhi <= xlo) xhi = xlo + 1.0;
    if (yhi <= ylo) yhi = ylo + 1.0;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << " " << H
       << "\">\n<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    char buf[64];
    for (const auto& e : entries) {
        const double lx = std::log10(e.r), ly = std::log10(std::max(e.beta2, 1e-300));
        const double px = pad + (lx - xlo) / (xhi - xlo) * (W - 2 * pad);
        const double py = H - pad - (ly - ylo) / (yhi - ylo) * (H - 2 * pad);
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px, py);
        os << buf;
    }
    os << "\"/>\n</svg>\n";
}

int cmd_generate(const GeneratorSpec& spec, const std::string& out) {
    DiscreteMeasure mu = run_generator(spec);
    save_measure(mu, out);
    std::cout << "wrote " << mu.size() << " points, total_mass " << fmt17(mu.total_mass())
              << " -> " << out << "\n";
    return kExitOk;
}

int cmd_analyze(const std::string& measure_path, const AnalysisConfig& cfg,
                const std::string& outdir) {
    DiscreteMeasure mu = load_measure(measure_path);
    AnalysisResult res = analyze(mu, cfg);
    fs::create_directories(outdir);
    write_profile_csv(outdir + "/profile.csv", mu, res, cfg.profile_cap);
    write_sqfn_csv(outdir + "/sqfn.csv", res);
    write_verdicts_csv(outdir + "/verdicts.csv", res);
    write_report_json(outdir + "/report.json", mu, cfg, res, measure_path);
    std::cout << "analyzed " << res.eval_ids.size() << " points; median s2 "
              << fmt17(res.summary.median_s2) << ", median slope "
              << fmt17(res.summary.median_slope) << "\n";
    for (const auto& [k, v] : res.summary.fractions)
        std::cout << "  " << k << ": " << fmt17(v) << "\n";
    if (res.summary.accuracy) std::cout << "  accuracy: " << fmt17(*res.summary.accuracy) << "\n";
    return kExitOk;
}

int cmd_czdemo(const std::string& nu_path, const std::string& mu_path, double lambda,
               const std::string& out) {
    SignedMeasure nu = load_signed(nu_path);
    DiscreteMeasure mu = load_measure(mu_path);
    CZDecomposition dec = cz_decompose(nu, mu, lambda);
    AuditReport rep = cz_audit(dec, nu, mu);
    std::ofstream os(out);
    if (!os) throw ValidationError("cannot write '" + out + "'");
    os << rep.to_json() << '\n';
    std::cout << "cubes: " << dec.cubes.size() << "\n";
    for (const auto& c : rep.clauses)
        std::cout << "  " << c.id << ": " << (c.pass ? "pass" : "FAIL") << " (constant "
                  << fmt17(c.constant) << ")\n";
    return rep.all_pass ? kExitOk : kExitAuditFail;
}

int cmd_blowup(const std::string& measure_path, int point_id, const std::string& radii_csv,
               double window, const std::string& out, const std::string& svg) {
    DiscreteMeasure mu = load_measure(measure_path);
    if (point_id < 0 || static_cast<size_t>(point_id) >= mu.size())
        throw ValidationError("blowup: point id out of range");
    const std::vector<double> radii = parse_doubles(radii_csv);
    BlowupTrace tr = blowup_trace(mu, mu.point(point_id), radii, window);
    std::ofstream os(out);
    if (!os) throw ValidationError("cannot write '" + out + "'");
    os << "point_id,r,beta2,c_fit,max_rel_dev\n";
    for (const auto& e : tr.entries)
        os << point_id << ',' << fmt17(e.r) << ',' << fmt17(e.beta2) << ',' << fmt17(e.c_fit)
           << ',' << fmt17(e.max_rel_dev) << '\n';
    if (!svg.empty()) write_sparkline_svg(svg, tr.entries);
    std::cout << "beta2 log-log slope: " << fmt17(tr.beta2_slope) << "\n";
    return kExitOk;
}

int cmd_report(const std::string& verdicts_path, const std::string& out) {
    std::ifstream in(verdicts_path);
    if (!in) throw ValidationError("cannot open '" + verdicts_path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty verdicts file");
    std::map<std::string, size_t> counts;
    std::vector<double> s2s, slopes;
    size_t total = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells = parse_strings(line);
        if (cells.size() < 7) throw ValidationError("verdicts row too short");
        ++counts[cells[1]];
        ++total;
        if (cells[1] != "boundary-excluded") {
            s2s.push_back(std::stod(cells[2]));
            slopes.push_back(std::stod(cells[3]));
        }
    }
    if (total == 0) throw ValidationError("verdicts file has no rows");
    nlohmann::ordered_json j;
    nlohmann::ordered_json fr;
    for (const auto& [k, c] : counts) fr[k] = static_cast<double>(c) / total;
    j["fractions"] = fr;
    j["medians"] = {{"s2", median_of(s2s)}, {"slope", median_of(slopes)}};
    j["points"] = total;
    std::ofstream os(out);
    if (!os) throw ValidationError("cannot write '" + out + "'");
    os << j.dump(2) << '\n';
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiscale density diagnostics for weighted point-cloud measures"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "emit a synthetic measure (CSV + JSON sidecar)");
    GeneratorSpec spec;
    std::string gen_out = "measure.csv";
    std::string profile_name = "sinusoid";
    std::string mixture_inputs;
    gen->add_option("--kind", spec.kind, "plane|lipschitz_graph|circle|cantor4|mixture")
        ->required();
    gen->add_option("--n", spec.n, "intrinsic dimension");
    gen->add_option("--d", spec.d, "ambient dimension");
    gen->add_option("--L", spec.side_length, "domain side length");
    gen->add_option("--s", spec.grid_step, "grid step");
    gen->add_option("--R", spec.radius, "circle radius");
    gen->add_option("--samples", spec.samples, "circle sample count");
    gen->add_option("--depth", spec.depth, "cantor4 depth");
    gen->add_option("--budget", spec.point_budget, "cantor4 point budget");
    gen->add_option("--profile", profile_name, "graph profile: sinusoid|sawtooth|linear|zero");
    gen->add_option("--amplitude", spec.profile.amplitude, "profile amplitude");
    gen->add_option("--period", spec.profile.period, "profile period");
    gen->add_option("--slope", spec.profile.slope, "linear profile slope");
    gen->add_option("--inputs", mixture_inputs, "mixture: comma-separated measure CSVs");
    gen->add_option("--seed", spec.seed, "generator seed (recorded in metadata)");
    gen->add_option("--out", gen_out, "output CSV path");

    // analyze
    auto* ana = app.add_subcommand("analyze", "profiles, square functions, verdicts, report");
    std::string ana_measure, ana_outdir = "out", ana_config;
    AnalysisConfig acfg;
    ana->add_option("--measure", ana_measure, "measure CSV")->required();
    ana->add_option("--config", ana_config, "flat key=value config file (flags win)");
    auto* opt_oct = ana->add_option("--octaves", acfg.octaves, "requested octave count");
    auto* opt_m = ana->add_option("--m", acfg.per_octave, "scales per octave");
    auto* opt_safety = ana->add_option("--safety", acfg.safety, "resolution safety factor");
    auto* opt_eval = ana->add_option("--eval", acfg.eval, "eval points: all|random");
    auto* opt_k = ana->add_option("--eval-k", acfg.eval_k, "random eval sample size");
    auto* opt_seed = ana->add_option("--seed", acfg.seed, "sampling seed");
    auto* opt_tau = ana->add_option("--tau", acfg.classifier.slope_tau, "divergence slope/octave");
    auto* opt_floor =
        ana->add_option("--floor", acfg.classifier.density_floor, "low-density floor");
    auto* opt_cap = ana->add_option("--profile-cap", acfg.profile_cap, "profile CSV point cap");
    ana->add_option("--outdir", ana_outdir, "output directory");

    // czdemo
    auto* cz = app.add_subcommand("czdemo", "Calderon-Zygmund decomposition + audit JSON");
    std::string cz_nu, cz_mu, cz_out = "cz_audit.json";
    double cz_lambda = 1.0;
    cz->add_option("--nu", cz_nu, "signed measure CSV")->required();
    cz->add_option("--mu", cz_mu, "reference measure CSV")->required();
    cz->add_option("--lambda", cz_lambda, "threshold level")->required();
    cz->add_option("--out", cz_out, "audit JSON path");

    // blowup
    auto* blw = app.add_subcommand("blowup", "tangent blowup trace (CSV + SVG sparkline)");
    std::string bl_measure, bl_radii, bl_out = "trace.csv", bl_svg;
    int bl_point = 0;
    double bl_window = 5.0;
    blw->add_option("--measure", bl_measure, "measure CSV")->required();
    blw->add_option("--point-id", bl_point, "support point id")->required();
    blw->add_option("--radii", bl_radii, "comma-separated radii, descending")->required();
    blw->add_option("--window", bl_window, "blowup window");
    blw->add_option("--out", bl_out, "trace CSV path");
    blw->add_option("--svg", bl_svg, "sparkline SVG path");

    // report
    auto* rep = app.add_subcommand("report", "re-aggregate a verdicts CSV into report JSON");
    std::string rep_verdicts, rep_out = "report.json";
    rep->add_option("--verdicts", rep_verdicts, "verdicts CSV")->required();
    rep->add_option("--out", rep_out, "report JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (!mixture_inputs.empty()) spec.mixture_inputs = parse_strings(mixture_inputs);
            spec.profile = GraphProfile::parse(profile_name, spec.profile.amplitude,
                                               spec.profile.period, spec.profile.slope);
            return cmd_generate(spec, gen_out);
        }
        if (ana->parsed()) {
            if (!ana_config.empty()) {
                AnalysisConfig from_file = load_config_file(ana_config, AnalysisConfig{});
                // flags win over the file
                if (!*opt_oct) acfg.octaves = from_file.octaves;
                if (!*opt_m) acfg.per_octave = from_file.per_octave;
                if (!*opt_safety) acfg.safety = from_file.safety;
                if (!*opt_eval) acfg.eval = from_file.eval;
                if (!*opt_k) acfg.eval_k = from_file.eval_k;
                if (!*opt_seed) acfg.seed = from_file.seed;
                if (!*opt_tau) acfg.classifier.slope_tau = from_file.classifier.slope_tau;
                if (!*opt_floor)
                    acfg.classifier.density_floor = from_file.classifier.density_floor;
                if (!*opt_cap) acfg.profile_cap = from_file.profile_cap;
            }
            return cmd_analyze(ana_measure, acfg, ana_outdir);
        }
        if (cz->parsed()) return cmd_czdemo(cz_nu, cz_mu, cz_lambda, cz_out);
        if (blw->parsed())
            return cmd_blowup(bl_measure, bl_point, bl_radii, bl_window, bl_out, bl_svg);
        if (rep->parsed()) return cmd_report(rep_verdicts, rep_out);
    } catch (const ResolutionError& e) {
        std::cerr << "resolution error: " << e.what() << "\n";
        return kExitResolution;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
