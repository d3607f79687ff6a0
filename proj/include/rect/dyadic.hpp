#pragma once

#include <string>
#include <vector>

#include "rect/measure.hpp"

namespace rect {

// One cube of the translated dyadic hierarchy. Keys are integer lattice
// coordinates at the cube's own generation; coarser keys are arithmetic
// shifts of finer ones, so children partition their parent exactly.
struct DyadicCube {
    uint32_t id = 0;
    int generation = 0;  // J(Q)
    std::vector<int64_t> key;
    double side = 0.0;  // l(Q) = 2^-j * base_scale
    double mass = 0.0;
    int32_t parent = -1;
    std::vector<uint32_t> children;
    std::vector<uint32_t> neighbors;  // N(Q), includes the cube itself
    std::vector<uint32_t> members;    // support point ids
    Box member_bbox;                  // actual spread, can be far below side
};

class DyadicLattice {
public:
    DyadicLattice(const DiscreteMeasure& mu, int j_min, int j_max, uint64_t seed);

    const DiscreteMeasure& measure() const { return *mu_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    double base_scale() const { return base_scale_; }
    const std::vector<double>& offset() const { return offset_; }

    const std::vector<DyadicCube>& cubes() const { return cubes_; }
    const DyadicCube& cube(uint32_t id) const { return cubes_[id]; }
    // ids of the generation-j cubes, key-lexicographic order
    const std::vector<uint32_t>& generation(int j) const;
    const std::vector<uint32_t>& roots() const { return generation(j_min_); }
    bool is_leaf(uint32_t id) const { return cubes_[id].children.empty(); }

    std::string to_json() const;

private:
    const DiscreteMeasure* mu_;
    int j_min_, j_max_;
    double base_scale_ = 0.0;
    std::vector<double> offset_;
    std::vector<DyadicCube> cubes_;
    std::vector<std::vector<uint32_t>> by_generation_;

    void link_neighbors();
};

DyadicLattice build_lattice(const DiscreteMeasure& mu, int j_min, int j_max, uint64_t seed);

// m_Q f: mu-weighted mean of f over the cube's members.
double cube_mean(const DyadicLattice& lat, const std::vector<double>& f, uint32_t cube_id);

// Delta_Q f on the members of Q: per member, mean of its child minus m_Q f.
// Throws on leaves; the truncation remainder handles those.
std::vector<double> martingale_delta(const DyadicLattice& lat, const std::vector<double>& f,
                                     uint32_t cube_id);

struct EnergyIdentity {
    double lhs = 0.0;        // int_R f^2 dmu
    double rhs = 0.0;        // mu(R) m_R^2 + sum of ||Delta_Q f||^2 over non-leaves
    double remainder = 0.0;  // within-leaf variance of the truncation
};

EnergyIdentity energy_identity(const DyadicLattice& lat, const std::vector<double>& f,
                               uint32_t root_id);

// N(Q) per the same-generation representative-within-l(Q) relation.
std::vector<uint32_t> neighbors(const DyadicLattice& lat, uint32_t cube_id);

}  // namespace rect
