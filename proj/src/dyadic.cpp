#include "rect/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

namespace rect {

DyadicLattice::DyadicLattice(const DiscreteMeasure& mu, int j_min, int j_max, uint64_t seed)
    : mu_(&mu), j_min_(j_min), j_max_(j_max) {
    if (j_max < j_min) throw ValidationError("build_lattice: j_max below j_min");
    if (mu.size() == 0) throw ValidationError("build_lattice: empty measure");

    base_scale_ = std::exp2(std::ceil(std::log2(std::max(mu.diameter(), mu.resolution()))));
    const double finest_side = base_scale_ * std::exp2(static_cast<double>(-j_max));
    if (finest_side < mu.resolution())
        throw ResolutionError("build_lattice: generation " + std::to_string(j_max) +
                              " side " + fmt17(finest_side) + " subdivides below h = " +
                              fmt17(mu.resolution()));

    const int d = mu.dim();
    Rng rng(seed);
    offset_.resize(d);
    const Box bb = mu.bounding_box();
    for (int a = 0; a < d; ++a) offset_[a] = bb.lo[a] - rng.uniform01() * base_scale_;

    // Integer keys at the finest generation; coarser keys are floor-halvings
    // (arithmetic shift), which makes the nesting exact by construction.
    const size_t N = mu.size();
    std::vector<int64_t> fine(N * d);
    for (size_t i = 0; i < N; ++i) {
        const Point p = mu.point(i);
        for (int a = 0; a < d; ++a)
            fine[i * d + a] =
                static_cast<int64_t>(std::floor((p[a] - offset_[a]) / finest_side));
    }

    by_generation_.resize(j_max_ - j_min_ + 1);
    std::map<std::vector<int64_t>, uint32_t> prev_parent;  // key -> cube id at j-1
    std::vector<int64_t> key(d);
    for (int j = j_min_; j <= j_max_; ++j) {
        const int shift = j_max_ - j;
        const double side = base_scale_ * std::exp2(static_cast<double>(-j));
        std::map<std::vector<int64_t>, uint32_t> level;
        // deterministic: scan points in index order, create cubes on first touch,
        // then re-number the level in key-lexicographic order
        std::map<std::vector<int64_t>, std::vector<uint32_t>> groups;
        for (size_t i = 0; i < N; ++i) {
            for (int a = 0; a < d; ++a) key[a] = fine[i * d + a] >> shift;
            groups[key].push_back(static_cast<uint32_t>(i));
        }
        for (auto& [k, members] : groups) {
            DyadicCube c;
            c.id = static_cast<uint32_t>(cubes_.size());
            c.generation = j;
            c.key = k;
            c.side = side;
            c.members = std::move(members);
            double mass = 0.0;
            c.member_bbox.lo.assign(d, std::numeric_limits<double>::infinity());
            c.member_bbox.hi.assign(d, -std::numeric_limits<double>::infinity());
            for (uint32_t id : c.members) {
                mass += mu.weight(id);
                const Point p = mu.point(id);
                for (int a = 0; a < d; ++a) {
                    c.member_bbox.lo[a] = std::min(c.member_bbox.lo[a], p[a]);
                    c.member_bbox.hi[a] = std::max(c.member_bbox.hi[a], p[a]);
                }
            }
            c.mass = mass;
            if (j > j_min_) {
                std::vector<int64_t> pk(d);
                for (int a = 0; a < d; ++a) pk[a] = k[a] >> 1;
                const auto it = prev_parent.find(pk);
                c.parent = static_cast<int32_t>(it->second);
                cubes_[it->second].children.push_back(c.id);
            }
            level[k] = c.id;
            by_generation_[j - j_min_].push_back(c.id);
            cubes_.push_back(std::move(c));
        }
        prev_parent = std::move(level);
    }
    link_neighbors();
}

const std::vector<uint32_t>& DyadicLattice::generation(int j) const {
    if (j < j_min_ || j > j_max_) throw ValidationError("lattice: generation out of range");
    return by_generation_[j - j_min_];
}

namespace {

double bbox_min_dist2(const Box& a, const Box& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.lo.size(); ++i) {
        double t = 0.0;
        if (a.hi[i] < b.lo[i])
            t = b.lo[i] - a.hi[i];
        else if (b.hi[i] < a.lo[i])
            t = a.lo[i] - b.hi[i];
        s += t * t;
    }
    return s;
}

// min pairwise point distance <= l, exact, with bbox prune and early exit
bool has_close_pair(const DiscreteMeasure& mu, const DyadicCube& a, const DyadicCube& b,
                    double l) {
    const double l2 = l * l;
    if (bbox_min_dist2(a.member_bbox, b.member_bbox) > l2) return false;
    for (uint32_t ia : a.members) {
        const Point pa = mu.point(ia);
        for (uint32_t ib : b.members) {
            if (dist2(pa, mu.point(ib)) <= l2) return true;
        }
    }
    return false;
}

}  // namespace

void DyadicLattice::link_neighbors() {
    const int d = mu_->dim();
    for (auto& gen_ids : by_generation_) {
        std::map<std::vector<int64_t>, uint32_t> by_key;
        for (uint32_t id : gen_ids) by_key[cubes_[id].key] = id;
        for (uint32_t id : gen_ids) {
            DyadicCube& q = cubes_[id];
            // candidates within 2 cells; farther cells are > l(Q) apart
            std::vector<int64_t> probe(d);
            std::vector<int> step(d, -2);
            for (;;) {
                for (int a = 0; a < d; ++a) probe[a] = q.key[a] + step[a];
                const auto it = by_key.find(probe);
                if (it != by_key.end()) {
                    const uint32_t oid = it->second;
                    if (oid == id) {
                        q.neighbors.push_back(oid);  // Q in N(Q)
                    } else if (has_close_pair(*mu_, q, cubes_[oid], q.side)) {
                        q.neighbors.push_back(oid);
                    }
                }
                int a = 0;
                for (; a < d; ++a) {
                    if (++step[a] <= 2) break;
                    step[a] = -2;
                }
                if (a == d) break;
            }
            std::sort(q.neighbors.begin(), q.neighbors.end());
        }
    }
}

DyadicLattice build_lattice(const DiscreteMeasure& mu, int j_min, int j_max, uint64_t seed) {
    return DyadicLattice(mu, j_min, j_max, seed);
}

std::vector<uint32_t> neighbors(const DyadicLattice& lat, uint32_t cube_id) {
    return lat.cube(cube_id).neighbors;
}

double cube_mean(const DyadicLattice& lat, const std::vector<double>& f, uint32_t cube_id) {
    const DyadicCube& q = lat.cube(cube_id);
    if (!(q.mass > 0.0)) throw ValidationError("cube_mean: cube carries no mass");
    double s = 0.0;
    for (uint32_t id : q.members) s += lat.measure().weight(id) * f[id];
    return s / q.mass;
}

std::vector<double> martingale_delta(const DyadicLattice& lat, const std::vector<double>& f,
                                     uint32_t cube_id) {
    const DyadicCube& q = lat.cube(cube_id);
    if (q.children.empty())
        throw ValidationError("martingale_delta: leaf cube has no child decomposition");
    const double mq = cube_mean(lat, f, cube_id);
    // child mean per member
    std::vector<double> out(q.members.size(), 0.0);
    std::map<uint32_t, double> child_mean;
    for (uint32_t c : q.children) child_mean[c] = cube_mean(lat, f, c);
    std::map<uint32_t, uint32_t> member_child;
    for (uint32_t c : q.children)
        for (uint32_t id : lat.cube(c).members) member_child[id] = c;
    for (size_t i = 0; i < q.members.size(); ++i)
        out[i] = child_mean[member_child[q.members[i]]] - mq;
    return out;
}

EnergyIdentity energy_identity(const DyadicLattice& lat, const std::vector<double>& f,
                               uint32_t root_id) {
    const DiscreteMeasure& mu = lat.measure();
    EnergyIdentity e;
    const DyadicCube& root = lat.cube(root_id);
    for (uint32_t id : root.members) e.lhs += mu.weight(id) * f[id] * f[id];

    // one bottom-up pass: integral and mass per cube in D(R)
    std::vector<uint32_t> stack = {root_id}, order;
    while (!stack.empty()) {
        const uint32_t q = stack.back();
        stack.pop_back();
        order.push_back(q);
        for (uint32_t c : lat.cube(q).children) stack.push_back(c);
    }
    std::map<uint32_t, double> mean;
    for (auto it = order.rbegin(); it != order.rend(); ++it) mean[*it] = cube_mean(lat, f, *it);

    const double m_root = mean[root_id];
    e.rhs = root.mass * m_root * m_root;
    for (uint32_t q : order) {
        const DyadicCube& cq = lat.cube(q);
        if (cq.children.empty()) {
            const double ml = mean[q];
            for (uint32_t id : cq.members) {
                const double t = f[id] - ml;
                e.remainder += mu.weight(id) * t * t;
            }
            continue;
        }
        // ||Delta_Q f||^2 = sum_children mass(P) (m_P - m_Q)^2
        const double mq = mean[q];
        double norm2 = 0.0;
        for (uint32_t c : cq.children) {
            const double t = mean[c] - mq;
            norm2 += lat.cube(c).mass * t * t;
        }
        e.rhs += norm2;
    }
    return e;
}

std::string DyadicLattice::to_json() const {
    nlohmann::ordered_json j;
    j["base_scale"] = base_scale_;
    j["j_min"] = j_min_;
    j["j_max"] = j_max_;
    j["offset"] = offset_;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : cubes_) {
        nlohmann::ordered_json jc;
        jc["id"] = c.id;
        jc["j"] = c.generation;
        jc["anchor"] = c.key;
        jc["side"] = c.side;
        jc["mass"] = c.mass;
        jc["parent"] = c.parent;
        jc["children"] = c.children;
        jc["neighbors"] = c.neighbors;
        jc["points"] = c.members.size();
        arr.push_back(jc);
    }
    j["cubes"] = arr;
    return j.dump(2);
}

}  // namespace rect
