#include "rect/tangent.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace rect {

Blowup blowup(const DiscreteMeasure& mu, Point x, double r, double window) {
    if (!(r > 0.0)) throw ValidationError("blowup: radius must be positive");
    if (!(window >= 1.0)) throw ValidationError("blowup: window must be >= 1");
    const double norm = mu.ball_mass(x, r);
    if (!(norm > 0.0)) throw ValidationError("blowup: mu(B(x,r)) vanishes");

    // membership decided in original coordinates so the window predicate is
    // immune to the rescaling round-off
    const std::vector<uint32_t> keep = mu.ball_points(x, window * r);
    const int d = mu.dim();
    std::vector<double> pts, w;
    pts.reserve(keep.size() * d);
    w.reserve(keep.size());
    for (uint32_t id : keep) {
        const Point p = mu.point(id);
        for (int a = 0; a < d; ++a) pts.push_back((p[a] - x[a]) / r);
        w.push_back(mu.weight(id) / norm);
    }
    Blowup b;
    b.base_point.assign(x.begin(), x.end());
    b.r = r;
    b.window = window;
    b.normalization = norm;
    Metadata meta = mu.meta();
    meta.truncated_axes.clear();  // window truncation is radial, not axis-aligned
    b.measure = build_measure(std::move(pts), std::move(w), mu.intrinsic_dim(), d,
                              mu.resolution() / r, std::move(meta));
    return b;
}

FlatnessScore flatness_beta2(const Blowup& nu, int n) {
    const DiscreteMeasure& m = nu.measure;
    const int d = m.dim();
    if (m.size() == 0) throw ValidationError("flatness_beta2: empty blowup");
    if (n < 1 || n >= d + 1) throw ValidationError("flatness_beta2: bad plane dimension");

    // distinct-point count guards the covariance rank
    {
        std::vector<std::vector<double>> uniq;
        for (size_t i = 0; i < m.size() && uniq.size() <= static_cast<size_t>(n); ++i) {
            std::vector<double> p(m.point(i).begin(), m.point(i).end());
            if (std::find(uniq.begin(), uniq.end(), p) == uniq.end()) uniq.push_back(p);
        }
        if (uniq.size() < static_cast<size_t>(n))
            throw ValidationError("flatness_beta2: fewer than n distinct points");
    }

    double W = 0.0;
    Eigen::VectorXd bary = Eigen::VectorXd::Zero(d);
    for (size_t i = 0; i < m.size(); ++i) {
        W += m.weight(i);
        for (int a = 0; a < d; ++a) bary[a] += m.weight(i) * m.point(i)[a];
    }
    bary /= W;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (size_t i = 0; i < m.size(); ++i) {
        Eigen::VectorXd v(d);
        for (int a = 0; a < d; ++a) v[a] = m.point(i)[a] - bary[a];
        cov += m.weight(i) * v * v.transpose();
    }
    cov /= W;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    // top-n principal directions span the plane
    Eigen::MatrixXd V(d, n);
    for (int k = 0; k < n; ++k) V.col(k) = es.eigenvectors().col(d - 1 - k);

    FlatnessScore out;
    out.plane_point.assign(bary.data(), bary.data() + d);
    out.basis.resize(static_cast<size_t>(n) * d);
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < d; ++a) out.basis[k * d + a] = V(a, k);

    double acc = 0.0;
    for (size_t i = 0; i < m.size(); ++i) {
        const Point p = m.point(i);
        double norm2 = 0.0;
        for (int a = 0; a < d; ++a) norm2 += p[a] * p[a];
        if (norm2 > 1.0) continue;  // beta2 integrates over B(0,1) only
        Eigen::VectorXd v(d);
        for (int a = 0; a < d; ++a) v[a] = p[a] - bary[a];
        const Eigen::VectorXd proj = V.transpose() * v;
        const double dist2 = v.squaredNorm() - proj.squaredNorm();
        acc += m.weight(i) * std::max(dist2, 0.0);
    }
    out.beta2 = std::sqrt(acc);
    return out;
}

UniformityScore uniformity_score(const Blowup& nu, int n, int probe_count, uint64_t seed,
                                 double rho_lo) {
    const DiscreteMeasure& m = nu.measure;
    if (probe_count < 2) throw ValidationError("uniformity_score: need at least 2 probes");
    if (m.size() == 0) throw ValidationError("uniformity_score: empty blowup");

    // probe centers keep B(y,1) inside the window so truncation cannot read
    // as non-uniformity
    const double keep_radius = std::max(nu.window - 1.0, 0.0);
    std::vector<uint32_t> eligible;
    for (size_t i = 0; i < m.size(); ++i) {
        double norm2 = 0.0;
        for (int a = 0; a < m.dim(); ++a) norm2 += m.point(i)[a] * m.point(i)[a];
        if (std::sqrt(norm2) <= keep_radius) eligible.push_back(static_cast<uint32_t>(i));
    }
    if (eligible.size() < 2) throw ValidationError("uniformity_score: insufficient probes");

    Rng rng(seed);
    const auto pick = rng.sample_indices(eligible.size(), probe_count);
    if (rho_lo <= 0.0) rho_lo = std::max(10.0 * m.resolution(), 1e-6);
    const double rho_hi = 1.0;
    if (!(rho_lo < rho_hi))
        throw ValidationError("uniformity_score: blowup resolution too coarse for probes");
    const int rho_steps = 6;

    std::vector<double> ratios;
    for (uint32_t e : pick) {
        const Point y = m.point(eligible[e]);
        for (int k = 0; k < rho_steps; ++k) {
            const double rho = rho_lo * std::pow(rho_hi / rho_lo,
                                                 static_cast<double>(k) / (rho_steps - 1));
            double pw = 1.0;
            for (int i = 0; i < n; ++i) pw *= rho;
            ratios.push_back(m.ball_mass(y, rho) / pw);
        }
    }
    UniformityScore s;
    s.c_fit = median_of(ratios);
    if (!(s.c_fit > 0.0)) {
        s.max_rel_dev = std::numeric_limits<double>::infinity();
        return s;
    }
    for (double q : ratios)
        s.max_rel_dev = std::max(s.max_rel_dev, std::abs(q - s.c_fit) / s.c_fit);
    return s;
}

BlowupTrace blowup_trace(const DiscreteMeasure& mu, Point x, const std::vector<double>& radii,
                         double window, int probe_count, uint64_t seed) {
    if (radii.empty()) throw ValidationError("blowup_trace: empty radius list");
    BlowupTrace tr;
    tr.entries.resize(radii.size());
    const int n = mu.intrinsic_dim();
    parallel_for(radii.size(), [&](size_t i) {
        const Blowup b = blowup(mu, x, radii[i], window);
        TraceEntry e;
        e.r = radii[i];
        e.beta2 = flatness_beta2(b, n).beta2;
        const UniformityScore u = uniformity_score(b, n, probe_count, seed + i);
        e.c_fit = u.c_fit;
        e.max_rel_dev = u.max_rel_dev;
        tr.entries[i] = e;
    });
    // least squares on (log r, log beta2); floor keeps exact-zero beta2 finite
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double npts = static_cast<double>(radii.size());
    for (const auto& e : tr.entries) {
        const double lx = std::log(e.r);
        const double ly = std::log(std::max(e.beta2, 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = npts * sxx - sx * sx;
    tr.beta2_slope = denom != 0.0 ? (npts * sxy - sx * sy) / denom : 0.0;
    return tr;
}

}  // namespace rect
