#include "rect/measure.hpp"

#include <algorithm>
#include <cmath>

namespace rect {

namespace {
constexpr uint32_t kLeafSize = 16;
}

BallQueryIndex::BallQueryIndex(const std::vector<double>& pts, const std::vector<double>& weights,
                               int dim)
    : dim_(dim), pts_(&pts), w_(&weights) {
    const uint32_t n = static_cast<uint32_t>(weights.size());
    order_.resize(n);
    for (uint32_t i = 0; i < n; ++i) order_[i] = i;
    nodes_.reserve(n / (kLeafSize / 2) + 4);
    if (n > 0) build(0, n);
}

int32_t BallQueryIndex::build(uint32_t begin, uint32_t end) {
    const int32_t ni = static_cast<int32_t>(nodes_.size());
    nodes_.emplace_back();
    {
        Node& n = nodes_.back();
        n.lo.assign(dim_, std::numeric_limits<double>::infinity());
        n.hi.assign(dim_, -std::numeric_limits<double>::infinity());
        n.begin = begin;
        n.count = end - begin;
        for (uint32_t k = begin; k < end; ++k) {
            const double* p = pts_->data() + static_cast<size_t>(order_[k]) * dim_;
            n.wsum += (*w_)[order_[k]];
            for (int a = 0; a < dim_; ++a) {
                n.lo[a] = std::min(n.lo[a], p[a]);
                n.hi[a] = std::max(n.hi[a], p[a]);
            }
        }
    }
    if (end - begin <= kLeafSize) return ni;

    // Split on the widest axis at the median; ties broken by point id so the
    // tree is identical across runs.
    int axis = 0;
    double widest = -1.0;
    for (int a = 0; a < dim_; ++a) {
        const double w = nodes_[ni].hi[a] - nodes_[ni].lo[a];
        if (w > widest) {
            widest = w;
            axis = a;
        }
    }
    const uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](uint32_t a, uint32_t b) {
                         const double va = (*pts_)[static_cast<size_t>(a) * dim_ + axis];
                         const double vb = (*pts_)[static_cast<size_t>(b) * dim_ + axis];
                         return va < vb || (va == vb && a < b);
                     });
    const int32_t l = build(begin, mid);
    const int32_t r = build(mid, end);
    nodes_[ni].left = l;
    nodes_[ni].right = r;
    nodes_[ni].count = 0;
    return ni;
}

double BallQueryIndex::min_dist2(const Node& n, Point x) {
    double s = 0.0;
    for (size_t a = 0; a < x.size(); ++a) {
        double t = 0.0;
        if (x[a] < n.lo[a])
            t = n.lo[a] - x[a];
        else if (x[a] > n.hi[a])
            t = x[a] - n.hi[a];
        s += t * t;
    }
    return s;
}

double BallQueryIndex::max_dist2(const Node& n, Point x) {
    double s = 0.0;
    for (size_t a = 0; a < x.size(); ++a) {
        const double t = std::max(std::abs(x[a] - n.lo[a]), std::abs(x[a] - n.hi[a]));
        s += t * t;
    }
    return s;
}

double BallQueryIndex::query_ball(int32_t ni, Point x, double r, double r2) const {
    const Node& n = nodes_[ni];
    if (min_dist2(n, x) > r2) return 0.0;
    if (max_dist2(n, x) <= r2) return n.wsum;
    if (n.left < 0) {
        double s = 0.0;
        for (uint32_t k = n.begin; k < n.begin + n.count; ++k) {
            const uint32_t id = order_[k];
            const double* p = pts_->data() + static_cast<size_t>(id) * dim_;
            double d2 = 0.0;
            for (int a = 0; a < dim_; ++a) {
                const double t = p[a] - x[a];
                d2 += t * t;
            }
            // closed-ball predicate d2 <= r*r, shared verbatim with the
            // brute-force path so the two never disagree on boundary atoms
            if (d2 <= r2) s += (*w_)[id];
        }
        return s;
    }
    return query_ball(n.left, x, r, r2) + query_ball(n.right, x, r, r2);
}

double BallQueryIndex::ball_mass(Point x, double r) const {
    if (nodes_.empty()) return 0.0;
    return query_ball(0, x, r, r * r);
}

double BallQueryIndex::query_box(int32_t ni, const Box& b) const {
    const Node& n = nodes_[ni];
    bool outside = false, inside = true;
    for (int a = 0; a < dim_; ++a) {
        if (n.lo[a] > b.hi[a] || n.hi[a] < b.lo[a]) outside = true;
        if (n.lo[a] < b.lo[a] || n.hi[a] > b.hi[a]) inside = false;
    }
    if (outside) return 0.0;
    if (inside) return n.wsum;
    if (n.left < 0) {
        double s = 0.0;
        for (uint32_t k = n.begin; k < n.begin + n.count; ++k) {
            const uint32_t id = order_[k];
            if (b.contains(Point(pts_->data() + static_cast<size_t>(id) * dim_, dim_)))
                s += (*w_)[id];
        }
        return s;
    }
    return query_box(n.left, b) + query_box(n.right, b);
}

double BallQueryIndex::box_mass(const Box& b) const {
    if (nodes_.empty()) return 0.0;
    return query_box(0, b);
}

void BallQueryIndex::collect_ball(int32_t ni, Point x, double r2, std::vector<uint32_t>& out) const {
    const Node& n = nodes_[ni];
    if (min_dist2(n, x) > r2) return;
    if (n.left >= 0) {
        collect_ball(n.left, x, r2, out);
        collect_ball(n.right, x, r2, out);
        return;
    }
    const bool all_in = max_dist2(n, x) <= r2;
    for (uint32_t k = n.begin; k < n.begin + n.count; ++k) {
        const uint32_t id = order_[k];
        if (!all_in) {
            const double* p = pts_->data() + static_cast<size_t>(id) * dim_;
            double d2 = 0.0;
            for (int a = 0; a < dim_; ++a) {
                const double t = p[a] - x[a];
                d2 += t * t;
            }
            if (d2 > r2) continue;
        }
        out.push_back(id);
    }
}

std::vector<uint32_t> BallQueryIndex::ball_points(Point x, double r) const {
    std::vector<uint32_t> out;
    if (!nodes_.empty()) collect_ball(0, x, r * r, out);
    std::sort(out.begin(), out.end());
    return out;
}

void BallQueryIndex::collect_box(int32_t ni, const Box& b, std::vector<uint32_t>& out) const {
    const Node& n = nodes_[ni];
    for (int a = 0; a < dim_; ++a)
        if (n.lo[a] > b.hi[a] || n.hi[a] < b.lo[a]) return;
    if (n.left >= 0) {
        collect_box(n.left, b, out);
        collect_box(n.right, b, out);
        return;
    }
    for (uint32_t k = n.begin; k < n.begin + n.count; ++k) {
        const uint32_t id = order_[k];
        if (b.contains(Point(pts_->data() + static_cast<size_t>(id) * dim_, dim_)))
            out.push_back(id);
    }
}

std::vector<uint32_t> BallQueryIndex::box_points(const Box& b) const {
    std::vector<uint32_t> out;
    if (!nodes_.empty()) collect_box(0, b, out);
    std::sort(out.begin(), out.end());
    return out;
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> points, std::vector<double> weights,
                                 int intrinsic_dim, int ambient_dim, double resolution,
                                 Metadata meta)
    : d_(ambient_dim), n_(intrinsic_dim), h_(resolution), meta_(std::move(meta)) {
    if (d_ <= 0) throw ValidationError("ambient dimension must be positive");
    if (n_ < 1 || n_ > d_)
        throw ValidationError("intrinsic dimension must satisfy 1 <= n <= d (got n=" +
                              std::to_string(n_) + ", d=" + std::to_string(d_) + ")");
    if (!(h_ > 0.0)) throw ValidationError("resolution h must be positive");
    if (points.size() != weights.size() * static_cast<size_t>(d_))
        throw ValidationError("points and weights arrays have mismatched lengths");
    for (size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0))
            throw ValidationError("negative or NaN weight at index " + std::to_string(i));
    }
    for (double c : points) {
        if (std::isnan(c)) throw ValidationError("NaN coordinate in point array");
    }
    // total mass accumulated in index order, once, so it is reproducible.
    double s = 0.0;
    for (double w : weights) s += w;
    total_mass_ = s;

    auto payload = std::make_shared<Payload>();
    payload->points = std::move(points);
    payload->weights = std::move(weights);
    payload->index = BallQueryIndex(payload->points, payload->weights, d_);
    data_ = std::move(payload);
}

double DiscreteMeasure::ball_mass(Point x, double r) const {
    if (!data_) throw ValidationError("ball_mass: measure not initialized");
    if (r < 0.0) throw ValidationError("ball_mass: negative radius");
    for (double c : x)
        if (std::isnan(c)) throw ValidationError("ball_mass: NaN query coordinate");
    return data_->index.ball_mass(x, r);
}

double DiscreteMeasure::ball_mass_brute(Point x, double r) const {
    if (r < 0.0) throw ValidationError("ball_mass: negative radius");
    double s = 0.0;
    const double r2 = r * r;
    for (size_t i = 0; i < size(); ++i) {
        if (dist2(point(i), x) <= r2) s += data_->weights[i];
    }
    return s;
}

double DiscreteMeasure::box_mass(const Box& b) const {
    if (!data_) throw ValidationError("box_mass: measure not initialized");
    return data_->index.box_mass(b);
}

Box DiscreteMeasure::bounding_box() const {
    Box b;
    b.lo.assign(d_, 0.0);
    b.hi.assign(d_, 0.0);
    if (size() == 0) return b;
    b.lo.assign(d_, std::numeric_limits<double>::infinity());
    b.hi.assign(d_, -std::numeric_limits<double>::infinity());
    for (size_t i = 0; i < size(); ++i) {
        const Point p = point(i);
        for (int a = 0; a < d_; ++a) {
            b.lo[a] = std::min(b.lo[a], p[a]);
            b.hi[a] = std::max(b.hi[a], p[a]);
        }
    }
    return b;
}

namespace {
DiscreteMeasure subset(const DiscreteMeasure& mu, const std::vector<uint32_t>& keep) {
    std::vector<double> pts, w;
    pts.reserve(keep.size() * mu.dim());
    w.reserve(keep.size());
    for (uint32_t id : keep) {
        const Point p = mu.point(id);
        pts.insert(pts.end(), p.begin(), p.end());
        w.push_back(mu.weight(id));
    }
    return DiscreteMeasure(std::move(pts), std::move(w), mu.intrinsic_dim(), mu.dim(),
                           mu.resolution(), mu.meta());
}
}  // namespace

DiscreteMeasure DiscreteMeasure::restrict_to(const Box& region) const {
    if (region.lo.size() != static_cast<size_t>(d_) || region.hi.size() != static_cast<size_t>(d_))
        throw ValidationError("restrict: region dimension mismatch");
    for (int a = 0; a < d_; ++a)
        if (region.lo[a] > region.hi[a]) throw ValidationError("restrict: malformed box");
    return subset(*this, box_points(region));
}

DiscreteMeasure DiscreteMeasure::restrict_to(const Ball& region) const {
    if (region.center.size() != static_cast<size_t>(d_) || region.radius < 0.0)
        throw ValidationError("restrict: malformed ball");
    return subset(*this, ball_points(region.center, region.radius));
}

DiscreteMeasure build_measure(std::vector<double> points, std::vector<double> weights,
                              int intrinsic_dim, int ambient_dim, double resolution,
                              Metadata meta) {
    return DiscreteMeasure(std::move(points), std::move(weights), intrinsic_dim, ambient_dim,
                           resolution, std::move(meta));
}

SignedMeasure make_signed(DiscreteMeasure pos, DiscreteMeasure neg) {
    if (pos.dim() != neg.dim())
        throw ValidationError("signed measure parts must share the ambient dimension");
    return SignedMeasure{std::move(pos), std::move(neg)};
}

}  // namespace rect
