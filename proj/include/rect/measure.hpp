#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rect/common.hpp"

namespace rect {

// Axis-aligned box, closed on all faces.
struct Box {
    std::vector<double> lo, hi;

    bool contains(Point p) const {
        for (size_t i = 0; i < lo.size(); ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    }
    double diagonal() const {
        double s = 0.0;
        for (size_t i = 0; i < lo.size(); ++i) {
            const double t = hi[i] - lo[i];
            s += t * t;
        }
        return std::sqrt(s);
    }
};

struct Ball {
    std::vector<double> center;
    double radius = 0.0;
};

// Spatial index over a fixed point set. Internal nodes carry their subtree
// weight sum, so fully-covered subtrees contribute in O(1); only boundary
// leaves are scanned. Traversal order is fixed, which makes every query
// deterministic across runs.
class BallQueryIndex {
public:
    BallQueryIndex() = default;
    BallQueryIndex(const std::vector<double>& pts, const std::vector<double>& weights, int dim);

    double ball_mass(Point x, double r) const;
    double box_mass(const Box& b) const;
    // Ids of points in the closed ball, ascending.
    std::vector<uint32_t> ball_points(Point x, double r) const;
    std::vector<uint32_t> box_points(const Box& b) const;

private:
    struct Node {
        std::vector<double> lo, hi;
        double wsum = 0.0;
        uint32_t begin = 0, count = 0;  // leaf range into order_
        int32_t left = -1, right = -1;
    };

    int dim_ = 0;
    const std::vector<double>* pts_ = nullptr;
    const std::vector<double>* w_ = nullptr;
    std::vector<uint32_t> order_;
    std::vector<Node> nodes_;

    int32_t build(uint32_t begin, uint32_t end);
    void collect_ball(int32_t ni, Point x, double r2, std::vector<uint32_t>& out) const;
    void collect_box(int32_t ni, const Box& b, std::vector<uint32_t>& out) const;
    double query_ball(int32_t ni, Point x, double r, double r2) const;
    double query_box(int32_t ni, const Box& b) const;

    static double min_dist2(const Node& n, Point x);
    static double max_dist2(const Node& n, Point x);
};

struct MixtureComponent {
    std::string label;
    uint32_t first = 0;
    uint32_t count = 0;
    bool rectifiable = false;
};

// Sidecar metadata carried next to the CSV payload. `truncated_axes` marks
// coordinate directions along which the generator cut an ideal unbounded set;
// boundary flagging applies only along those.
struct Metadata {
    std::string generator = "raw";
    std::vector<std::pair<std::string, double>> params;
    uint64_t seed = 0;
    std::optional<bool> rectifiable;
    std::vector<int> truncated_axes;
    bool lipschitz_warning = false;
    std::vector<MixtureComponent> components;
};

// Weighted point cloud approximating a positive Radon measure. Immutable after
// construction; all queries are read-only and thread-safe. Copies share the
// point storage and index (the payload never mutates).
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    DiscreteMeasure(std::vector<double> points, std::vector<double> weights, int intrinsic_dim,
                    int ambient_dim, double resolution, Metadata meta = {});

    size_t size() const { return data_ ? data_->weights.size() : 0; }
    int dim() const { return d_; }
    int intrinsic_dim() const { return n_; }
    double resolution() const { return h_; }
    double total_mass() const { return total_mass_; }
    const Metadata& meta() const { return meta_; }

    Point point(size_t i) const { return Point(data_->points.data() + i * d_, d_); }
    double weight(size_t i) const { return data_->weights[i]; }
    const std::vector<double>& raw_points() const { return data_->points; }
    const std::vector<double>& raw_weights() const { return data_->weights; }

    // Mass of the closed Euclidean ball, via the index.
    double ball_mass(Point x, double r) const;
    // Same sum in original index order; the reference path for oracle tests.
    double ball_mass_brute(Point x, double r) const;
    double box_mass(const Box& b) const;
    std::vector<uint32_t> ball_points(Point x, double r) const {
        if (!data_) throw ValidationError("ball_points: measure not initialized");
        return data_->index.ball_points(x, r);
    }
    std::vector<uint32_t> box_points(const Box& b) const {
        if (!data_) throw ValidationError("box_points: measure not initialized");
        return data_->index.box_points(b);
    }

    Box bounding_box() const;
    // Support diameter proxy: bounding-box diagonal (deterministic, O(N)).
    double diameter() const { return bounding_box().diagonal(); }

    DiscreteMeasure restrict_to(const Box& region) const;
    DiscreteMeasure restrict_to(const Ball& region) const;

private:
    struct Payload {
        std::vector<double> points, weights;
        BallQueryIndex index;
    };

    int d_ = 0, n_ = 0;
    double h_ = 0.0, total_mass_ = 0.0;
    Metadata meta_;
    std::shared_ptr<const Payload> data_;
};

DiscreteMeasure build_measure(std::vector<double> points, std::vector<double> weights,
                              int intrinsic_dim, int ambient_dim, double resolution,
                              Metadata meta = {});

// Signed measure as disjoint positive/negative parts; no cancellation, so the
// total variation is the exact sum of part masses.
struct SignedMeasure {
    DiscreteMeasure pos, neg;

    double total_variation() const { return pos.total_mass() + neg.total_mass(); }
    double signed_ball_mass(Point x, double r) const {
        return pos.ball_mass(x, r) - neg.ball_mass(x, r);
    }
    int dim() const { return pos.dim(); }
};

SignedMeasure make_signed(DiscreteMeasure pos, DiscreteMeasure neg);

}  // namespace rect
