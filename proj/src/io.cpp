#include "rect/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rect {

using json = nlohmann::ordered_json;

std::string sidecar_path(const std::string& csv_path) {
    const auto dot = csv_path.find_last_of('.');
    const auto slash = csv_path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return csv_path + ".json";
    return csv_path.substr(0, dot) + ".json";
}

namespace {

json meta_to_json(const DiscreteMeasure& mu) {
    const Metadata& m = mu.meta();
    json j;
    j["d"] = mu.dim();
    j["n"] = mu.intrinsic_dim();
    j["h"] = mu.resolution();
    j["generator"] = m.generator;
    json params = json::object();
    for (const auto& [k, v] : m.params) params[k] = v;
    j["params"] = params;
    j["seed"] = m.seed;
    if (m.rectifiable) j["rectifiable"] = *m.rectifiable;
    j["truncated_axes"] = m.truncated_axes;
    if (m.lipschitz_warning) j["lipschitz_warning"] = true;
    if (!m.components.empty()) {
        json comps = json::array();
        for (const auto& c : m.components) {
            comps.push_back({{"label", c.label},
                             {"first", c.first},
                             {"count", c.count},
                             {"rectifiable", c.rectifiable}});
        }
        j["components"] = comps;
    }
    return j;
}

struct MetaFields {
    int d = 0, n = 0;
    double h = 0.0;
    Metadata meta;
};

MetaFields meta_from_json(const json& j) {
    MetaFields f;
    f.d = j.at("d").get<int>();
    f.n = j.at("n").get<int>();
    f.h = j.at("h").get<double>();
    f.meta.generator = j.value("generator", std::string("raw"));
    if (j.contains("params")) {
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
            f.meta.params.emplace_back(it.key(), it.value().get<double>());
    }
    f.meta.seed = j.value("seed", 0ull);
    if (j.contains("rectifiable")) f.meta.rectifiable = j["rectifiable"].get<bool>();
    if (j.contains("truncated_axes"))
        f.meta.truncated_axes = j["truncated_axes"].get<std::vector<int>>();
    f.meta.lipschitz_warning = j.value("lipschitz_warning", false);
    if (j.contains("components")) {
        for (const auto& c : j["components"]) {
            MixtureComponent mc;
            mc.label = c.value("label", std::string());
            mc.first = c.value("first", 0u);
            mc.count = c.value("count", 0u);
            mc.rectifiable = c.value("rectifiable", true);
            f.meta.components.push_back(mc);
        }
    }
    return f;
}

void write_rows(std::ostream& os, int d, const std::vector<double>& pts,
                const std::vector<double>& w, const std::vector<double>* signs = nullptr) {
    os << "x0";
    for (int a = 1; a < d; ++a) os << ",x" << a;
    os << ",w\n";
    for (size_t i = 0; i < w.size(); ++i) {
        for (int a = 0; a < d; ++a) os << fmt17(pts[i * d + a]) << ',';
        const double wv = signs ? w[i] * (*signs)[i] : w[i];
        os << fmt17(wv) << '\n';
    }
}

struct RawRows {
    int width = 0;
    std::vector<double> cells;  // row-major
    size_t rows = 0;
};

RawRows read_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open measure file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty measure file '" + path + "'");
    int width = 1;
    for (char c : line)
        if (c == ',') ++width;
    RawRows out;
    out.width = width;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int col = 0;
        const char* p = line.c_str();
        char* end = nullptr;
        for (;;) {
            const double v = std::strtod(p, &end);
            if (end == p)
                throw ValidationError("bad numeric cell in '" + path + "' row " +
                                      std::to_string(out.rows + 2));
            out.cells.push_back(v);
            ++col;
            p = end;
            if (*p == ',') {
                ++p;
            } else {
                break;
            }
        }
        if (col != width)
            throw ValidationError("row width " + std::to_string(col) + " != header width " +
                                  std::to_string(width) + " in '" + path + "'");
        ++out.rows;
    }
    return out;
}

}  // namespace

void save_measure(const DiscreteMeasure& mu, const std::string& csv_path) {
    std::ofstream os(csv_path);
    if (!os) throw ValidationError("cannot write '" + csv_path + "'");
    write_rows(os, mu.dim(), mu.raw_points(), mu.raw_weights());
    std::ofstream ms(sidecar_path(csv_path));
    if (!ms) throw ValidationError("cannot write '" + sidecar_path(csv_path) + "'");
    ms << meta_to_json(mu).dump(2) << '\n';
}

DiscreteMeasure load_measure(const std::string& csv_path) {
    std::ifstream ms(sidecar_path(csv_path));
    if (!ms)
        throw ValidationError("missing metadata sidecar '" + sidecar_path(csv_path) + "'");
    json j = json::parse(ms);
    MetaFields f = meta_from_json(j);

    RawRows rows = read_rows(csv_path);
    if (rows.width != f.d + 1)
        throw ValidationError("measure file row width " + std::to_string(rows.width) +
                              " does not match d+1 = " + std::to_string(f.d + 1));
    std::vector<double> pts(rows.rows * f.d), w(rows.rows);
    for (size_t i = 0; i < rows.rows; ++i) {
        for (int a = 0; a < f.d; ++a) pts[i * f.d + a] = rows.cells[i * rows.width + a];
        w[i] = rows.cells[i * rows.width + f.d];
    }
    return build_measure(std::move(pts), std::move(w), f.n, f.d, f.h, std::move(f.meta));
}

void save_signed(const SignedMeasure& nu, const std::string& csv_path) {
    std::ofstream os(csv_path);
    if (!os) throw ValidationError("cannot write '" + csv_path + "'");
    const int d = nu.dim();
    os << "x0";
    for (int a = 1; a < d; ++a) os << ",x" << a;
    os << ",w\n";
    for (size_t i = 0; i < nu.pos.size(); ++i) {
        for (int a = 0; a < d; ++a) os << fmt17(nu.pos.point(i)[a]) << ',';
        os << fmt17(nu.pos.weight(i)) << '\n';
    }
    for (size_t i = 0; i < nu.neg.size(); ++i) {
        for (int a = 0; a < d; ++a) os << fmt17(nu.neg.point(i)[a]) << ',';
        os << fmt17(-nu.neg.weight(i)) << '\n';
    }
    json j;
    j["d"] = d;
    j["n"] = nu.pos.intrinsic_dim();
    j["h"] = nu.pos.resolution();
    j["generator"] = "signed";
    j["params"] = json::object();
    std::ofstream ms(sidecar_path(csv_path));
    ms << j.dump(2) << '\n';
}

SignedMeasure load_signed(const std::string& csv_path) {
    std::ifstream ms(sidecar_path(csv_path));
    if (!ms)
        throw ValidationError("missing metadata sidecar '" + sidecar_path(csv_path) + "'");
    json j = json::parse(ms);
    const int d = j.at("d").get<int>();
    const int n = j.value("n", 1);
    const double h = j.value("h", 1.0);

    RawRows rows = read_rows(csv_path);
    if (rows.width != d + 1)
        throw ValidationError("signed measure row width " + std::to_string(rows.width) +
                              " does not match d+1 = " + std::to_string(d + 1));
    std::vector<double> ppts, pw, npts, nw;
    for (size_t i = 0; i < rows.rows; ++i) {
        const double wv = rows.cells[i * rows.width + d];
        auto& pts = wv >= 0.0 ? ppts : npts;
        auto& ws = wv >= 0.0 ? pw : nw;
        for (int a = 0; a < d; ++a) pts.push_back(rows.cells[i * rows.width + a]);
        ws.push_back(std::abs(wv));
    }
    return make_signed(build_measure(std::move(ppts), std::move(pw), n, d, h),
                       build_measure(std::move(npts), std::move(nw), n, d, h));
}

}  // namespace rect
