#include "rect/generators.hpp"

#include <algorithm>
#include <cmath>

#include "rect/io.hpp"

namespace rect {

double GraphProfile::value(double u) const {
    switch (kind) {
        case Kind::sinusoid:
            return amplitude * std::sin(2.0 * M_PI * u / period);
        case Kind::sawtooth: {
            const double t = u / period - std::floor(u / period);
            return t < 0.5 ? amplitude * (4.0 * t - 1.0) : amplitude * (3.0 - 4.0 * t);
        }
        case Kind::linear:
            return slope * u;
        case Kind::zero:
            return 0.0;
    }
    return 0.0;
}

double GraphProfile::lipschitz_bound() const {
    switch (kind) {
        case Kind::sinusoid:
            return 2.0 * M_PI * amplitude / period;
        case Kind::sawtooth:
            return 4.0 * amplitude / period;
        case Kind::linear:
            return std::abs(slope);
        case Kind::zero:
            return 0.0;
    }
    return 0.0;
}

GraphProfile GraphProfile::parse(const std::string& name, double amplitude, double period,
                                 double slope) {
    GraphProfile p;
    p.amplitude = amplitude;
    p.period = period;
    p.slope = slope;
    if (name == "sinusoid")
        p.kind = Kind::sinusoid;
    else if (name == "sawtooth")
        p.kind = Kind::sawtooth;
    else if (name == "linear")
        p.kind = Kind::linear;
    else if (name == "zero")
        p.kind = Kind::zero;
    else
        throw ValidationError("unknown graph profile '" + name + "'");
    return p;
}

namespace {

uint64_t grid_nodes(double L, double s) {
    // epsilon guard so L/s landing a hair under an integer keeps the endpoint
    return static_cast<uint64_t>(std::floor(L / s + 1e-9)) + 1;
}

std::vector<int> domain_axes(int n) {
    std::vector<int> ax(n);
    for (int i = 0; i < n; ++i) ax[i] = i;
    return ax;
}

}  // namespace

DiscreteMeasure gen_plane(int n, int d, double L, double s) {
    if (!(s > 0.0)) throw ValidationError("gen_plane: grid_step must be positive");
    if (L < s) throw ValidationError("gen_plane: side_length must be >= grid_step");
    if (n > d) throw ValidationError("gen_plane: n must not exceed d");
    const uint64_t per_axis = grid_nodes(L, s);
    uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= per_axis;

    double cell = 1.0;
    for (int i = 0; i < n; ++i) cell *= s;

    std::vector<double> pts(total * d, 0.0);
    std::vector<double> w(total, cell);
    std::vector<uint64_t> idx(n, 0);
    for (uint64_t p = 0; p < total; ++p) {
        for (int a = 0; a < n; ++a) pts[p * d + a] = static_cast<double>(idx[a]) * s;
        for (int a = n - 1; a >= 0; --a) {
            if (++idx[a] < per_axis) break;
            idx[a] = 0;
        }
    }

    Metadata meta;
    meta.generator = "plane";
    meta.params = {{"L", L}, {"s", s}};
    meta.rectifiable = true;
    meta.truncated_axes = domain_axes(n);
    return build_measure(std::move(pts), std::move(w), n, d, s, std::move(meta));
}

DiscreteMeasure gen_lipschitz_graph(int n, int d, const GraphProfile& profile, double L, double s) {
    if (!(s > 0.0)) throw ValidationError("gen_lipschitz_graph: grid_step must be positive");
    if (L < s) throw ValidationError("gen_lipschitz_graph: side_length must be >= grid_step");
    if (n >= d) throw ValidationError("gen_lipschitz_graph: need n < d for a graph");
    const uint64_t per_axis = grid_nodes(L, s);
    uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= per_axis;
    const double lam = profile.lipschitz_bound();

    double cell = 1.0;
    for (int i = 0; i < n; ++i) cell *= s;

    std::vector<double> pts(total * d, 0.0);
    std::vector<double> w(total);
    std::vector<uint64_t> idx(n, 0);
    bool lipschitz_exceeded = false;
    for (uint64_t p = 0; p < total; ++p) {
        const double u0 = static_cast<double>(idx[0]) * s;
        for (int a = 0; a < n; ++a) pts[p * d + a] = static_cast<double>(idx[a]) * s;
        const double fv = profile.value(u0);
        if (!std::isfinite(fv))
            throw ValidationError("gen_lipschitz_graph: profile evaluation failed");
        pts[p * d + n] = fv;

        // profile depends on u0 only, so Df has a single nonzero entry and
        // det(I + Df^T Df) = 1 + (df/du0)^2
        const double df = (profile.value(u0 + s) - profile.value(u0 - s)) / (2.0 * s);
        if (std::abs(df) > lam * (1.0 + 1e-9) + 1e-12) lipschitz_exceeded = true;
        w[p] = std::sqrt(1.0 + df * df) * cell;

        for (int a = n - 1; a >= 0; --a) {
            if (++idx[a] < per_axis) break;
            idx[a] = 0;
        }
    }

    Metadata meta;
    meta.generator = "lipschitz_graph";
    meta.params = {{"L", L},
                   {"s", s},
                   {"amplitude", profile.amplitude},
                   {"period", profile.period},
                   {"slope", profile.slope},
                   {"lambda", lam},
                   {"profile_kind", static_cast<double>(static_cast<int>(profile.kind))}};
    meta.rectifiable = true;
    meta.truncated_axes = domain_axes(n);
    meta.lipschitz_warning = lipschitz_exceeded;
    return build_measure(std::move(pts), std::move(w), n, d, s * std::sqrt(1.0 + lam * lam),
                         std::move(meta));
}

DiscreteMeasure gen_circle(double R, uint64_t N) {
    if (!(R > 0.0)) throw ValidationError("gen_circle: radius must be positive");
    if (N < 3) throw ValidationError("gen_circle: need at least 3 samples");
    std::vector<double> pts(N * 2);
    const double wv = 2.0 * M_PI * R / static_cast<double>(N);
    std::vector<double> w(N, wv);
    for (uint64_t k = 0; k < N; ++k) {
        const double ang = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(N);
        pts[k * 2] = R * std::cos(ang);
        pts[k * 2 + 1] = R * std::sin(ang);
    }
    Metadata meta;
    meta.generator = "circle";
    meta.params = {{"R", R}, {"samples", static_cast<double>(N)}};
    meta.rectifiable = true;  // closed curve: no truncation edges
    return build_measure(std::move(pts), std::move(w), 1, 2, wv, std::move(meta));
}

DiscreteMeasure gen_cantor4(int K, uint64_t point_budget) {
    if (K < 1) throw ValidationError("gen_cantor4: depth must be >= 1");
    if (K > 30 || (1ull << (2 * K)) > point_budget)
        throw ResourceError("gen_cantor4: 4^" + std::to_string(K) +
                            " points exceed the configured budget of " +
                            std::to_string(point_budget));
    const uint64_t total = 1ull << (2 * K);
    // Anchors (lower-left corners) generation by generation. All coordinates
    // are dyadic rationals, so the construction is exact in binary.
    std::vector<double> anchors = {0.0, 0.0};
    double side = 1.0;
    for (int j = 0; j < K; ++j) {
        side *= 0.25;
        std::vector<double> next;
        next.reserve(anchors.size() * 4);
        const double off = 3.0 * side;
        for (size_t i = 0; i < anchors.size(); i += 2) {
            const double ax = anchors[i], ay = anchors[i + 1];
            next.insert(next.end(), {ax, ay, ax + off, ay, ax, ay + off, ax + off, ay + off});
        }
        anchors.swap(next);
    }
    std::vector<double> pts(total * 2);
    const double half = side * 0.5;
    for (uint64_t i = 0; i < total; ++i) {
        pts[i * 2] = anchors[i * 2] + half;
        pts[i * 2 + 1] = anchors[i * 2 + 1] + half;
    }
    std::vector<double> w(total, side);  // side = 4^-K = per-square mass

    Metadata meta;
    meta.generator = "cantor4";
    meta.params = {{"depth", static_cast<double>(K)}};
    meta.rectifiable = false;  // purely 1-unrectifiable; bbox faces are genuine set
    return build_measure(std::move(pts), std::move(w), 1, 2, side, std::move(meta));
}

DiscreteMeasure gen_mixture(const std::vector<DiscreteMeasure>& parts, int intrinsic_dim) {
    if (parts.empty()) throw ValidationError("gen_mixture: empty part list");
    const int d = parts[0].dim();
    for (const auto& p : parts)
        if (p.dim() != d) throw ValidationError("gen_mixture: ambient dimension mismatch");

    std::vector<double> pts, w;
    double h = 0.0;
    Metadata meta;
    meta.generator = "mixture";
    uint32_t first = 0;
    for (const auto& p : parts) {
        pts.insert(pts.end(), p.raw_points().begin(), p.raw_points().end());
        w.insert(w.end(), p.raw_weights().begin(), p.raw_weights().end());
        h = std::max(h, p.resolution());
        MixtureComponent c;
        c.label = p.meta().generator;
        c.first = first;
        c.count = static_cast<uint32_t>(p.size());
        c.rectifiable = p.meta().rectifiable.value_or(true);
        meta.components.push_back(c);
        for (int ax : p.meta().truncated_axes) {
            if (std::find(meta.truncated_axes.begin(), meta.truncated_axes.end(), ax) ==
                meta.truncated_axes.end())
                meta.truncated_axes.push_back(ax);
        }
        first += c.count;
    }
    std::sort(meta.truncated_axes.begin(), meta.truncated_axes.end());
    // mixture-level label only when unanimous; mixed cases keep per-component labels
    bool all_rect = true, any_rect = false;
    for (const auto& c : meta.components) {
        all_rect = all_rect && c.rectifiable;
        any_rect = any_rect || c.rectifiable;
    }
    if (all_rect)
        meta.rectifiable = true;
    else if (!any_rect)
        meta.rectifiable = false;
    return build_measure(std::move(pts), std::move(w), intrinsic_dim, d, h, std::move(meta));
}

DiscreteMeasure run_generator(const GeneratorSpec& spec) {
    DiscreteMeasure mu;
    if (spec.kind == "plane") {
        mu = gen_plane(spec.n, spec.d, spec.side_length, spec.grid_step);
    } else if (spec.kind == "lipschitz_graph") {
        mu = gen_lipschitz_graph(spec.n, spec.d, spec.profile, spec.side_length, spec.grid_step);
    } else if (spec.kind == "circle") {
        mu = gen_circle(spec.radius, spec.samples);
    } else if (spec.kind == "cantor4") {
        mu = gen_cantor4(spec.depth, spec.point_budget);
    } else if (spec.kind == "mixture") {
        std::vector<DiscreteMeasure> parts;
        for (const auto& path : spec.mixture_inputs) parts.push_back(load_measure(path));
        mu = gen_mixture(parts, spec.n);
    } else {
        throw ValidationError("unknown generator kind '" + spec.kind + "'");
    }
    return mu;
}

}  // namespace rect
