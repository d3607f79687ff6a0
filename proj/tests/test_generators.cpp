#include <doctest.h>

#include "oracles.hpp"
#include "rect/density.hpp"
#include "rect/generators.hpp"

using namespace rect;

TEST_CASE("gen_plane point counts and masses") {
    DiscreteMeasure a = gen_plane(1, 2, 1.0, 0.25);
    CHECK(a.size() == 5);
    for (size_t i = 0; i < a.size(); ++i) CHECK(a.weight(i) == 0.25);
    CHECK(a.total_mass() == doctest::Approx(1.25).epsilon(1e-15));

    DiscreteMeasure b = gen_plane(2, 3, 1.0, 0.5);
    CHECK(b.size() == 9);
    CHECK(b.total_mass() == doctest::Approx(2.25).epsilon(1e-15));

    CHECK_THROWS_AS(gen_plane(1, 2, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(gen_plane(1, 2, 0.1, 0.25), ValidationError);
}

TEST_CASE("gen_plane interior density near 2 for n=1") {
    DiscreteMeasure seg = gen_plane(1, 2, 1.0, 1e-3);
    const std::vector<double> x = {0.5, 0.0};
    const double r = 0.1;
    const double theta = density_ratio(seg, x, r);
    CHECK(std::abs(theta - 2.0) <= 2.0 * 1e-3 / r);
}

TEST_CASE("graph generator weights") {
    // zero profile reduces to the plane
    DiscreteMeasure flat = gen_lipschitz_graph(1, 2, GraphProfile::parse("zero", 0, 1, 0), 1.0, 0.01);
    DiscreteMeasure plane = gen_plane(1, 2, 1.0, 0.01);
    REQUIRE(flat.size() == plane.size());
    for (size_t i = 0; i < flat.size(); ++i) CHECK(flat.weight(i) == plane.weight(i));

    // linear profile: every weight sqrt(1+m^2) s
    const double m = 0.75;
    DiscreteMeasure lin =
        gen_lipschitz_graph(1, 2, GraphProfile::parse("linear", 0, 1, m), 1.0, 0.01);
    for (size_t i = 0; i < lin.size(); ++i)
        CHECK(lin.weight(i) == doctest::Approx(std::sqrt(1 + m * m) * 0.01).epsilon(1e-9));

    // sinusoid mass against the quadrature oracle (s small enough that the
    // endpoint excess s*(J(0)+J(L))/2 stays under the 1e-3 relative budget)
    const double a = 0.1, L = 1.0, s = 2e-4;
    DiscreteMeasure sin_g =
        gen_lipschitz_graph(1, 2, GraphProfile::parse("sinusoid", a, L, 0), L, s);
    const double want = oracle::integrate(
        [&](double u) {
            const double fp = a * 2.0 * M_PI / L * std::cos(2.0 * M_PI * u / L);
            return std::sqrt(1.0 + fp * fp);
        },
        0.0, L, 1e-12);
    CHECK(std::abs(sin_g.total_mass() - want) / want <= 1e-3);
    CHECK_FALSE(sin_g.meta().lipschitz_warning);
}

TEST_CASE("gen_circle layout") {
    DiscreteMeasure c4 = gen_circle(1.0, 4);
    REQUIRE(c4.size() == 4);
    for (size_t i = 0; i < 4; ++i) CHECK(c4.weight(i) == doctest::Approx(M_PI / 2).epsilon(1e-15));
    CHECK(c4.point(1)[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c4.point(1)[1] == doctest::Approx(1.0).epsilon(1e-15));

    DiscreteMeasure c = gen_circle(2.0, 10000);
    CHECK(c.total_mass() == doctest::Approx(4.0 * M_PI).epsilon(1e-12));

    DiscreteMeasure big = gen_circle(1.0, 100000);
    CHECK(std::abs(big.total_mass() - 2.0 * M_PI) <= 1e-9);

    DiscreteMeasure unit = gen_circle(1.0, 100000);
    const std::vector<double> x = {1.0, 0.0};
    CHECK(std::abs(unit.ball_mass(x, 1.0) - oracle::circle_ball_mass(1.0, 1.0)) <=
          2.0 * unit.resolution());

    CHECK_THROWS_AS(gen_circle(0.0, 100), ValidationError);
    CHECK_THROWS_AS(gen_circle(1.0, 2), ValidationError);
}

TEST_CASE("gen_cantor4 structure") {
    DiscreteMeasure k1 = gen_cantor4(1);
    REQUIRE(k1.size() == 4);
    CHECK(k1.total_mass() == 1.0);
    for (size_t i = 0; i < 4; ++i) CHECK(k1.weight(i) == 0.25);
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = i + 1; j < 4; ++j)
            CHECK(std::sqrt(dist2(k1.point(i), k1.point(j))) >= 0.5);

    DiscreteMeasure k2 = gen_cantor4(2);
    CHECK(k2.size() == 16);
    CHECK(k2.total_mass() == 1.0);

    CHECK_THROWS_AS(gen_cantor4(0), ValidationError);
    CHECK_THROWS_AS(gen_cantor4(12, 1 << 20), ResourceError);
}

TEST_CASE("cantor4 density oscillates across octave pairs") {
    // theta(x, 2*4^-j) = 1/2 exactly for every dust point: the ball captures
    // the generation-j square (diam sqrt(2) 4^-j) and nothing else (foreign
    // dust sits beyond the 2*4^-j gap). The octave-pair oscillation bound is
    // the brute-force worst case 3/16 (attained when theta = 11/16 at both
    // bracketing scales); most points clear 1/4.
    const int K = 6;
    DiscreteMeasure c = gen_cantor4(K);
    Rng rng(5);
    int cleared_quarter = 0, trials = 0;
    for (int t = 0; t < 40; ++t) {
        const uint32_t id = static_cast<uint32_t>(rng.below(c.size()));
        const std::vector<double> x(c.point(id).begin(), c.point(id).end());
        for (int j = 2; j < K - 1; ++j) {
            const double rj = std::pow(4.0, -j);
            const double th_mid = density_ratio(c, x, 2.0 * rj);
            CHECK(th_mid == doctest::Approx(0.5).epsilon(1e-12));
            const double d1 = std::abs(delta(c, x, rj));
            const double d2 = std::abs(delta(c, x, 2.0 * rj));
            CHECK(std::max(d1, d2) >= 0.1875 - 1e-12);
            ++trials;
            if (std::max(d1, d2) >= 0.25 - 1e-12) ++cleared_quarter;
        }
    }
    CHECK(cleared_quarter >= trials * 3 / 4);
}

TEST_CASE("mixture bookkeeping") {
    DiscreteMeasure g =
        gen_lipschitz_graph(1, 2, GraphProfile::parse("sinusoid", 0.1, 1, 0), 1.0, 0.01);
    DiscreteMeasure c = gen_cantor4(3);
    DiscreteMeasure one = gen_mixture({g}, 1);
    CHECK(one.total_mass() == g.total_mass());

    DiscreteMeasure mix = gen_mixture({g, c}, 1);
    CHECK(mix.total_mass() == doctest::Approx(g.total_mass() + c.total_mass()).epsilon(1e-14));
    REQUIRE(mix.meta().components.size() == 2);
    CHECK(mix.meta().components[0].label == "lipschitz_graph");
    CHECK(mix.meta().components[0].rectifiable);
    CHECK(mix.meta().components[1].label == "cantor4");
    CHECK_FALSE(mix.meta().components[1].rectifiable);
    CHECK(mix.meta().components[0].count == g.size());
    CHECK(mix.meta().components[1].first == g.size());
    CHECK_FALSE(mix.meta().rectifiable.has_value());  // mixed labels stay per-component

    DiscreteMeasure d3 = gen_plane(1, 3, 1.0, 0.5);
    CHECK_THROWS_AS(gen_mixture({g, d3}, 1), ValidationError);
}

TEST_CASE("generators are byte-deterministic") {
    DiscreteMeasure a = gen_cantor4(5);
    DiscreteMeasure b = gen_cantor4(5);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a.point(i)[0] == b.point(i)[0]);
        CHECK(a.point(i)[1] == b.point(i)[1]);
        CHECK(a.weight(i) == b.weight(i));
    }
}

TEST_CASE("AD-regularity audit reports finite c0 on the regular generators") {
    for (const DiscreteMeasure& mu :
         {gen_plane(1, 2, 2.0, 1e-3), gen_circle(1.0, 20000), gen_cantor4(6)}) {
        const AdAudit a = ad_regularity_audit(mu, 60, 12, 42);
        CHECK(std::isfinite(a.c0));
        CHECK(a.theta_min > 0.0);
        CHECK(a.c0 < 16.0);
    }
}
