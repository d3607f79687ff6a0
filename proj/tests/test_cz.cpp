#include <doctest.h>

#include <cmath>

#include "rect/cz.hpp"
#include "rect/generators.hpp"

using namespace rect;

namespace {

// nu = f mu on a random subset of mu points; returns the signed measure and
// the max |f| used
struct MadeNu {
    SignedMeasure nu;
    double max_abs_f = 0.0;
};

MadeNu make_nu_on(const DiscreteMeasure& mu, int atom_count, double f_scale, uint64_t seed) {
    Rng rng(seed);
    const auto ids = rng.sample_indices(mu.size(), atom_count);
    std::vector<double> ppts, pw, npts, nw;
    double mx = 0.0;
    for (uint32_t id : ids) {
        const double f = f_scale * (rng.uniform01() * 2.0 - 1.0);
        mx = std::max(mx, std::abs(f));
        const Point p = mu.point(id);
        auto& pts = f >= 0 ? ppts : npts;
        auto& ws = f >= 0 ? pw : nw;
        pts.insert(pts.end(), p.begin(), p.end());
        ws.push_back(std::abs(f) * mu.weight(id));
    }
    MadeNu out;
    out.nu = make_signed(build_measure(ppts, pw, mu.intrinsic_dim(), mu.dim(), mu.resolution()),
                         build_measure(npts, nw, mu.intrinsic_dim(), mu.dim(), mu.resolution()));
    out.max_abs_f = mx;
    return out;
}

}  // namespace

TEST_CASE("lambda hypothesis bound and off-support atoms are rejected") {
    DiscreteMeasure mu = gen_plane(1, 2, 2.0, 0.01);
    MadeNu m = make_nu_on(mu, 20, 1.0, 3);
    const double bound = std::exp2(3) * m.nu.total_variation() / mu.total_mass();
    CHECK_THROWS_AS(cz_decompose(m.nu, mu, bound * 0.5), ValidationError);

    DiscreteMeasure stray = build_measure({0.5071, 0.2}, {1.0}, 1, 2, 0.01);
    DiscreteMeasure zero = build_measure({}, {}, 1, 2, 0.01);
    SignedMeasure bad = make_signed(stray, zero);
    CHECK_THROWS_AS(cz_decompose(bad, mu, 1e9), ValidationError);
}

TEST_CASE("nu = f mu with |f| <= lambda/2: no cubes, f returned as is") {
    DiscreteMeasure mu = gen_plane(1, 2, 2.0, 0.01);
    MadeNu m = make_nu_on(mu, 40, 1.0, 5);
    const double lambda = 2.0 * m.max_abs_f;  // comfortably above every |f|
    CZDecomposition dec = cz_decompose(m.nu, mu, lambda);
    CHECK(dec.cubes.empty());
    AuditReport rep = cz_audit(dec, m.nu, mu);
    CHECK(rep.all_pass);
    // f matches the atom ratios
    for (size_t i = 0; i < mu.size(); ++i)
        CHECK(std::abs(dec.f_good[i] - dec.nu_weight[i] / mu.weight(i)) <= 1e-15);
}

TEST_CASE("single heavy atom: one cube, (5.4) holds exactly") {
    DiscreteMeasure mu = gen_plane(1, 2, 2.0, 0.01);
    // heavy positive atom at a grid point
    const uint32_t id = 100;
    std::vector<double> app(mu.point(id).begin(), mu.point(id).end());
    const double M = 5.0;
    DiscreteMeasure pos = build_measure(app, {M}, 1, 2, 0.01);
    DiscreteMeasure zero = build_measure({}, {}, 1, 2, 0.01);
    SignedMeasure nu = make_signed(pos, zero);
    const double bound = std::exp2(3) * M / mu.total_mass();
    const double lambda = 4.0 * bound;  // small but legal; the atom ratio M/w >> lambda
    REQUIRE(M / mu.weight(id) > lambda);
    CZDecomposition dec = cz_decompose(nu, mu, lambda);
    REQUIRE(dec.cubes.size() == 1);
    CHECK(dec.wj_nu_integral[0] == doctest::Approx(M).epsilon(1e-14));
    double int_b = 0.0;
    for (uint32_t i : dec.Rj_support[0]) int_b += dec.bj_value[0] * mu.weight(i);
    CHECK(int_b == doctest::Approx(M).epsilon(1e-12));
    AuditReport rep = cz_audit(dec, nu, mu);
    CHECK(rep.all_pass);
}

TEST_CASE("random instances against the plane pass the full audit") {
    DiscreteMeasure mu = gen_plane(1, 2, 2.0, 0.005);
    Rng rng(11);
    int nonempty = 0;
    for (int t = 0; t < 30; ++t) {
        MadeNu m = make_nu_on(mu, 15, 60.0, 100 + t);
        const double bound = std::exp2(3) * m.nu.total_variation() / mu.total_mass();
        const double lambda = bound * std::pow(10.0, rng.uniform(0.05, 0.5));
        if (!(lambda > bound)) continue;
        CZDecomposition dec = cz_decompose(m.nu, mu, lambda);
        AuditReport rep = cz_audit(dec, m.nu, mu);
        if (!rep.all_pass) {
            for (const auto& c : rep.clauses)
                if (!c.pass) MESSAGE(c.id, " constant ", c.constant, " witness ", c.witness);
        }
        CHECK(rep.all_pass);
        for (const auto& c : rep.clauses)
            if (c.id == "5.5" || c.id == "5.6" || c.id == "overlap" || c.id == "g_inf")
                CHECK(c.constant <= 100.0);
        if (!dec.cubes.empty()) ++nonempty;
    }
    CHECK(nonempty >= 10);  // the fixture exercises the nontrivial branch
}

TEST_CASE("decomposition identity nu = g mu + sum beta_j is atom-exact") {
    DiscreteMeasure mu = gen_plane(1, 2, 2.0, 0.005);
    MadeNu m = make_nu_on(mu, 20, 80.0, 77);
    const double bound = std::exp2(3) * m.nu.total_variation() / mu.total_mass();
    const double lambda = 2.0 * bound;
    CZDecomposition dec = cz_decompose(m.nu, mu, lambda);
    REQUIRE_FALSE(dec.cubes.empty());
    AuditReport rep = cz_audit(dec, m.nu, mu);
    for (const auto& c : rep.clauses) {
        if (c.id == "identity") {
            CHECK(c.pass);
            CHECK(c.constant <= 1e-12);
        }
        if (c.id == "g_inf") CHECK(c.constant <= 100.0);
        if (c.id == "beta_zero_mean") CHECK(c.pass);
    }
}

TEST_CASE("negative control: corrupted b_j flunks (5.4)") {
    DiscreteMeasure mu = gen_plane(1, 2, 2.0, 0.01);
    MadeNu m = make_nu_on(mu, 15, 80.0, 13);
    const double bound = std::exp2(3) * m.nu.total_variation() / mu.total_mass();
    CZDecomposition dec = cz_decompose(m.nu, mu, 2.0 * bound);
    REQUIRE_FALSE(dec.cubes.empty());
    for (double& b : dec.bj_value) b *= 2.0;
    AuditReport rep = cz_audit(dec, m.nu, mu);
    CHECK_FALSE(rep.all_pass);
    bool flagged = false;
    for (const auto& c : rep.clauses)
        if (c.id == "5.4" && !c.pass) flagged = true;
    CHECK(flagged);
}

TEST_CASE("homogeneity: scaling nu and lambda by 2 keeps the cube set") {
    DiscreteMeasure mu = gen_plane(1, 2, 2.0, 0.01);
    MadeNu m = make_nu_on(mu, 15, 80.0, 29);
    const double bound = std::exp2(3) * m.nu.total_variation() / mu.total_mass();
    const double lambda = 3.0 * bound;
    CZDecomposition a = cz_decompose(m.nu, mu, lambda);

    auto scale_part = [](const DiscreteMeasure& part) {
        std::vector<double> w(part.raw_weights());
        for (double& v : w) v *= 2.0;
        return build_measure(part.raw_points(), w, part.intrinsic_dim(), part.dim(),
                             part.resolution());
    };
    SignedMeasure nu2 = make_signed(scale_part(m.nu.pos), scale_part(m.nu.neg));
    CZDecomposition b = cz_decompose(nu2, mu, 2.0 * lambda);
    REQUIRE(a.cubes.size() == b.cubes.size());
    for (size_t j = 0; j < a.cubes.size(); ++j) {
        CHECK(a.cubes[j].side == b.cubes[j].side);
        CHECK(a.cubes[j].center == b.cubes[j].center);
    }
    AuditReport rep = cz_audit(b, nu2, mu);
    CHECK(rep.all_pass);
}

TEST_CASE("audit report serializes") {
    DiscreteMeasure mu = gen_plane(1, 2, 1.0, 0.02);
    MadeNu m = make_nu_on(mu, 10, 5.0, 1);
    const double bound = std::exp2(3) * m.nu.total_variation() / mu.total_mass();
    CZDecomposition dec = cz_decompose(m.nu, mu, 2.0 * bound);
    const std::string js = cz_audit(dec, m.nu, mu).to_json();
    CHECK(js.find("\"clause\": \"5.1\"") != std::string::npos);
    CHECK(js.find("all_pass") != std::string::npos);
}
