#include "rect/density.hpp"

#include <algorithm>
#include <cmath>

#include "rect/special.hpp"

namespace rect {

namespace {
double pow_int(double base, int e) {
    double v = 1.0;
    for (int i = 0; i < e; ++i) v *= base;
    return v;
}
}  // namespace

double density_ratio(const DiscreteMeasure& mu, Point x, double r) {
    if (!(r > 0.0)) throw ValidationError("density_ratio: radius must be positive");
    return mu.ball_mass(x, r) / pow_int(r, mu.intrinsic_dim());
}

double delta(const DiscreteMeasure& mu, Point x, double r) {
    if (!(r > 0.0)) throw ValidationError("delta: radius must be positive");
    return density_ratio(mu, x, r) - density_ratio(mu, x, 2.0 * r);
}

DensityProfile compute_profile(const DiscreteMeasure& mu, Point x, const ScaleGrid& grid) {
    DensityProfile p;
    p.entries.reserve(grid.radii.size());
    for (double r : grid.radii) {
        ProfileEntry e;
        e.r = r;
        e.theta = density_ratio(mu, x, r);
        e.delta = e.theta - density_ratio(mu, x, 2.0 * r);
        p.entries.push_back(e);
    }
    const auto ex = extremes_of(p, grid);
    p.theta_star_lower = ex.lo_finest;
    p.theta_star_upper = ex.hi_global;
    return p;
}

DensityExtremes extremes_of(const DensityProfile& p, const ScaleGrid& grid) {
    DensityExtremes ex;
    if (p.entries.empty()) return ex;
    const size_t total = p.entries.size();
    const size_t fin_begin = total > static_cast<size_t>(grid.per_octave) + 1
                                 ? total - grid.per_octave - 1
                                 : 0;
    ex.lo_global = ex.hi_global = p.entries[0].theta;
    for (const auto& e : p.entries) {
        ex.lo_global = std::min(ex.lo_global, e.theta);
        ex.hi_global = std::max(ex.hi_global, e.theta);
    }
    ex.lo_finest = ex.hi_finest = p.entries[fin_begin].theta;
    for (size_t k = fin_begin; k < total; ++k) {
        ex.lo_finest = std::min(ex.lo_finest, p.entries[k].theta);
        ex.hi_finest = std::max(ex.hi_finest, p.entries[k].theta);
    }
    return ex;
}

DensityExtremes density_extremes(const DiscreteMeasure& mu, Point x, const ScaleGrid& grid) {
    return extremes_of(compute_profile(mu, x, grid), grid);
}

SquareFunctionResult square_function_from(const DensityProfile& p, const ScaleGrid& grid) {
    SquareFunctionResult out;
    const int K = grid.weighted_count();
    const int m = grid.per_octave;
    double acc = 0.0;
    for (int k = 0; k < K; ++k) {
        const double d = p.entries[k].delta;
        acc += d * d * grid.log_weight;
        if ((k + 1) % m == 0) out.s2_partial.push_back(acc);
    }
    out.s2 = acc;
    return out;
}

SquareFunctionResult square_function(const DiscreteMeasure& mu, Point x, const ScaleGrid& grid,
                                     bool with_smoothed) {
    const DensityProfile p = compute_profile(mu, x, grid);
    SquareFunctionResult out = square_function_from(p, grid);
    if (with_smoothed) {
        double acc = 0.0;
        for (int k = 0; k < grid.weighted_count(); ++k) {
            const double sd = smoothed_delta(mu, x, grid.radii[k]);
            acc += sd * sd * grid.log_weight;
        }
        out.smoothed_s2 = acc;
    }
    return out;
}

double divergence_slope(const std::vector<double>& s2_partial, int window_octaves) {
    if (s2_partial.empty()) return 0.0;
    const int o = static_cast<int>(s2_partial.size());
    const int w = std::min(window_octaves, o);
    const double head = o - w - 1 >= 0 ? s2_partial[o - w - 1] : 0.0;
    return (s2_partial[o - 1] - head) / w;
}

double smoothed_delta(const DiscreteMeasure& mu, Point x, double r) {
    if (!(r > 0.0)) throw ValidationError("smoothed_delta: radius must be positive");
    const int n = mu.intrinsic_dim();
    const double inv_r2 = 1.0 / (r * r);
    const double inv_4r2 = 0.25 * inv_r2;
    const double cr = 1.0 / pow_int(r, n);
    const double c2r = 1.0 / pow_int(2.0 * r, n);
    double s = 0.0;
    const size_t N = mu.size();
    const int d = mu.dim();
    const double* pts = mu.raw_points().data();
    for (size_t i = 0; i < N; ++i) {
        double d2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double t = pts[i * d + a] - x[a];
            d2 += t * t;
        }
        s += mu.weight(i) * (cr * std::exp(-d2 * inv_r2) - c2r * std::exp(-d2 * inv_4r2));
    }
    return s;
}

double kernel_psi(double s, double r, int n) {
    if (!(s > 0.0) || !(r > 0.0)) throw ValidationError("kernel_psi: arguments must be positive");
    return 2.0 * pow_int(s, n + 1) / pow_int(r, n + 2) * std::exp(-(s * s) / (r * r));
}

double smoothed_via_kernel(const DiscreteMeasure& mu, Point x, double r, int nodes_per_octave) {
    if (!(r > 0.0)) throw ValidationError("smoothed_via_kernel: radius must be positive");
    if (nodes_per_octave < 8)
        throw ValidationError("smoothed_via_kernel: quadrature grid coarser than 8 nodes/octave");
    const double lo = r / 100.0, hi = 100.0 * r;
    const double octaves = std::log2(hi / lo);
    const int K = static_cast<int>(std::ceil(octaves * nodes_per_octave));
    const double dlog = std::log(hi / lo) / K;
    const int n = mu.intrinsic_dim();
    // trapezoid in u = log s of Delta(x, e^u) psi~_r(e^u) e^u
    double acc = 0.0;
    double prev = 0.0;
    for (int j = 0; j <= K; ++j) {
        const double s = lo * std::exp(j * dlog);
        const double val = delta(mu, x, s) * kernel_psi(s, r, n) * s;
        if (j > 0) acc += 0.5 * (prev + val) * dlog;
        prev = val;
    }
    return acc;
}

double WindowSupBound::bound() const {
    return gamma_half_plus_one(n) * sup_window + sup_all * tail_factor;
}

WindowSupBound window_sup_bound(const DiscreteMeasure& mu, Point x, double r,
                                const ScaleGrid& grid) {
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("window_sup_bound: need 0 < r < 1");
    WindowSupBound out;
    out.n = mu.intrinsic_dim();
    const double cutoff = std::sqrt(r);
    for (double s : grid.radii) {
        const double a = std::abs(delta(mu, x, s));
        out.sup_all = std::max(out.sup_all, a);
        if (s <= cutoff) out.sup_window = std::max(out.sup_window, a);
    }
    out.tail_factor = gaussian_moment_tail(out.n, 1.0 / std::sqrt(r));
    return out;
}

std::vector<double> operator_T(const SignedMeasure& nu, const std::vector<Point>& eval_points,
                               const ScaleGrid& grid, int n) {
    std::vector<double> out(eval_points.size(), 0.0);
    parallel_for(eval_points.size(), [&](size_t i) {
        const Point x = eval_points[i];
        double acc = 0.0;
        for (int k = 0; k < grid.weighted_count(); ++k) {
            const double r = grid.radii[k];
            const double a = nu.signed_ball_mass(x, r) / pow_int(r, n);
            const double b = nu.signed_ball_mass(x, 2.0 * r) / pow_int(2.0 * r, n);
            acc += (a - b) * (a - b) * grid.log_weight;
        }
        out[i] = std::sqrt(acc);
    });
    return out;
}

double weak_11_statistic(const DiscreteMeasure& mu, const SignedMeasure& nu,
                         const ScaleGrid& grid, const std::vector<double>& lambda_list) {
    if (lambda_list.empty()) throw ValidationError("weak_11_statistic: empty lambda list");
    std::vector<Point> pts;
    pts.reserve(mu.size());
    for (size_t i = 0; i < mu.size(); ++i) pts.push_back(mu.point(i));
    const std::vector<double> T = operator_T(nu, pts, grid, mu.intrinsic_dim());
    const double tv = nu.total_variation();
    if (!(tv > 0.0)) return 0.0;
    double best = 0.0;
    for (double lam : lambda_list) {
        double excess = 0.0;
        for (size_t i = 0; i < mu.size(); ++i)
            if (T[i] > lam) excess += mu.weight(i);
        best = std::max(best, lam * excess / tv);
    }
    return best;
}

double carleson_energy(const DiscreteMeasure& mu, Point center, double R, const ScaleGrid& grid) {
    if (!(R > 0.0)) throw ValidationError("carleson_energy: positive radius required");
    const std::vector<uint32_t> members = mu.ball_points(center, R);
    if (members.empty()) return 0.0;
    std::vector<double> contrib(members.size(), 0.0);
    parallel_for(members.size(), [&](size_t i) {
        const Point x = mu.point(members[i]);
        double acc = 0.0;
        for (int k = 0; k < grid.weighted_count(); ++k) {
            const double r = grid.radii[k];
            if (r >= R) continue;
            const double dv = delta(mu, x, r);
            acc += dv * dv * grid.log_weight;
        }
        contrib[i] = mu.weight(members[i]) * acc;
    });
    double total = 0.0;
    for (double c : contrib) total += c;
    return total;
}

AdAudit ad_regularity_audit(const DiscreteMeasure& mu, int sample_points, int sample_radii,
                            uint64_t seed) {
    if (mu.size() == 0) throw ValidationError("ad_regularity_audit: empty measure");
    Rng rng(seed);
    const auto ids = rng.sample_indices(mu.size(), sample_points);
    const double r_lo = 10.0 * mu.resolution();
    const double r_hi = mu.diameter() / 4.0;
    if (!(r_lo < r_hi)) throw ResolutionError("ad_regularity_audit: 10h exceeds diam/4");
    AdAudit a;
    a.theta_min = std::numeric_limits<double>::infinity();
    a.theta_max = 0.0;
    for (uint32_t id : ids) {
        for (int j = 0; j < sample_radii; ++j) {
            const double r = r_lo * std::pow(r_hi / r_lo, (j + 0.5) / sample_radii);
            const double th = density_ratio(mu, mu.point(id), r);
            a.theta_min = std::min(a.theta_min, th);
            a.theta_max = std::max(a.theta_max, th);
        }
    }
    a.c0 = std::max(a.theta_max, a.theta_min > 0.0 ? 1.0 / a.theta_min
                                                   : std::numeric_limits<double>::infinity());
    return a;
}

}  // namespace rect
