#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rect/density.hpp"
#include "rect/generators.hpp"
#include "rect/special.hpp"

using namespace rect;

namespace {
std::vector<double> pt(double x, double y) { return {x, y}; }
}  // namespace

TEST_CASE("half-integer gamma values") {
    CHECK(gamma_half_plus_one(1) == doctest::Approx(std::sqrt(M_PI) / 2).epsilon(1e-15));
    CHECK(gamma_half_plus_one(2) == 1.0);
    CHECK(gamma_half_plus_one(3) == doctest::Approx(0.75 * std::sqrt(M_PI)).epsilon(1e-15));
    CHECK(gamma_half_plus_one(4) == 2.0);
}

TEST_CASE("kernel_psi values and integrals") {
    CHECK(kernel_psi(1.0, 1.0, 1) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(kernel_psi(0.0, 1.0, 1), ValidationError);
    CHECK_THROWS_AS(kernel_psi(1.0, 0.0, 1), ValidationError);

    // int_0^inf psi_r(s) ds = Gamma(n/2+1), independent of r
    for (int n : {1, 2, 3}) {
        for (double r : {0.5, 1.0, 2.0}) {
            const double got = oracle::integrate([&](double s) { return kernel_psi(s, r, n); },
                                                 1e-9, 12.0 * r, 1e-12);
            CHECK(std::abs(got - gamma_half_plus_one(n)) <= 1e-6);
        }
    }

    // int_0^inf psi_r(s) dr/r = Gamma(n/2+1)/s ; n=1, s=2 -> sqrt(pi)/4
    const double s = 2.0;
    const double got = oracle::integrate([&](double r) { return kernel_psi(s, r, 1) / r; },
                                         s / 400.0, 400.0 * s, 1e-12);
    CHECK(std::abs(got - std::sqrt(M_PI) / 4.0) <= 1e-6);
}

TEST_CASE("smoothed delta: atom closed form and flat-measure null") {
    for (int n : {1, 2}) {
        DiscreteMeasure atom = build_measure({0.0, 0.0}, {1.0}, n, 2, 1e-3);
        for (double r : {0.1, 0.7, 2.0}) {
            const double want = std::pow(r, -n) - std::pow(2.0 * r, -n);
            CHECK(smoothed_delta(atom, pt(0, 0), r) ==
                  doctest::Approx(want).epsilon(1e-14));
        }
    }

    // the Gaussian integral over an n-plane is r-independent, so the interior
    // smoothed difference vanishes up to discretization + edge truncation
    DiscreteMeasure seg = gen_plane(1, 2, 8.0, 1e-3);
    for (double r : {0.05, 0.1, 0.4}) {
        CHECK(std::abs(smoothed_delta(seg, pt(4.0, 0.0), r)) <= 1e-6 / r);
    }
}

TEST_CASE("kernel identity: quadrature route matches the direct sum") {
    DiscreteMeasure zero = build_measure({}, {}, 1, 2, 1.0);
    CHECK(smoothed_via_kernel(zero, pt(0, 0), 0.3) == 0.0);
    CHECK_THROWS_AS(smoothed_via_kernel(zero, pt(0, 0), 0.3, 4), ValidationError);

    DiscreteMeasure atom = build_measure({0.0, 0.0}, {1.0}, 1, 2, 1e-3);
    for (double r : {0.2, 1.0}) {
        const double want = 1.0 / r - 0.5 / r;
        CHECK(std::abs(smoothed_via_kernel(atom, pt(0, 0), r) - want) <=
              1e-3 * std::abs(want));
    }

    DiscreteMeasure circ = gen_circle(1.0, 20000);
    DiscreteMeasure cant = gen_cantor4(6);
    Rng rng(77);
    for (const DiscreteMeasure& mu : {circ, cant}) {
        for (int t = 0; t < 25; ++t) {
            const uint32_t id = static_cast<uint32_t>(rng.below(mu.size()));
            const std::vector<double> x(mu.point(id).begin(), mu.point(id).end());
            const double r =
                std::pow(10.0, rng.uniform(std::log10(20.0 * mu.resolution()), std::log10(0.2)));
            const double direct = smoothed_delta(mu, x, r);
            const double viaq = smoothed_via_kernel(mu, x, r, 128);
            CHECK(std::abs(direct - viaq) <= 1e-3 * (1.0 + std::abs(direct)));
        }
    }
}

TEST_CASE("windowed sup bound") {
    // tail factor at r = 0.01, n = 1: int_{10}^inf 2 t^2 e^{-t^2} dt
    DiscreteMeasure seg = gen_plane(1, 2, 4.0, 1e-3);
    ScaleGrid g = make_scale_grid(seg, 8, 4);
    WindowSupBound b = window_sup_bound(seg, pt(2.0, 0.0), 0.01, g);
    // factor e^{-100} out so the quadrature runs at unit scale
    const double tail_oracle =
        std::exp(-100.0) *
        oracle::integrate([](double t) { return 2.0 * t * t * std::exp(-(t * t - 100.0)); },
                          10.0, 24.0, 1e-12);
    CHECK(std::abs(b.tail_factor - tail_oracle) <= 1e-6 * tail_oracle);
    CHECK(b.tail_factor == doctest::Approx(3.7428e-43).epsilon(1e-3));
    CHECK(b.tail_factor < 1e-40);  // negligible

    // plane: both components at the discretization floor
    CHECK(b.sup_window <= 0.2);
    CHECK(b.bound() <= 0.5);
    CHECK_THROWS_AS(window_sup_bound(seg, pt(2.0, 0.0), 1.5, g), ValidationError);

    // |smoothed_delta(x,r)| <= Gamma(n/2+1) sup_{s<=sqrt r} |Delta| +
    //                          sup_all |Delta| * tail, audited on circle+cantor
    DiscreteMeasure circ = gen_circle(1.0, 20000);
    DiscreteMeasure cant = gen_cantor4(6);
    Rng rng(5);
    for (const DiscreteMeasure& mu : {circ, cant}) {
        ScaleGrid gm = make_scale_grid(mu, 9, 6);
        for (int t = 0; t < 50; ++t) {
            const uint32_t id = static_cast<uint32_t>(rng.below(mu.size()));
            const std::vector<double> x(mu.point(id).begin(), mu.point(id).end());
            const double r =
                std::pow(10.0, rng.uniform(std::log10(100.0 * mu.resolution()), std::log10(0.09)));
            const WindowSupBound wb = window_sup_bound(mu, x, r, gm);
            CHECK(std::abs(smoothed_delta(mu, x, r)) <= wb.bound() + 1e-12);
        }
    }
}

TEST_CASE("smoothed square function domination and fine-scale decay") {
    // smoothed_s2 <= C s2 + floor with C <= 10 on the rectifiable generators.
    // The Gaussian window must stay inside the data: on truncated supports the
    // top grid radius is capped well below the distance to the cut, otherwise
    // the smoothed side reads edge mass at scales the sharp side never visits.
    DiscreteMeasure plane = gen_plane(1, 2, 4.0, 2e-3);
    DiscreteMeasure circ = gen_circle(1.0, 20000);
    DiscreteMeasure graph =
        gen_lipschitz_graph(1, 2, GraphProfile::parse("sinusoid", 0.1, 1.0, 0), 1.0, 2e-4);
    const std::vector<std::vector<double>> centers = {pt(2.0, 0.0),
                                                      {circ.point(0)[0], circ.point(0)[1]},
                                                      {graph.point(2500)[0], graph.point(2500)[1]}};
    const DiscreteMeasure* mus[] = {&plane, &circ, &graph};
    const double rmax_cap[] = {0.5, 0.707, 0.125};  // <= edge distance / 4
    for (int i = 0; i < 3; ++i) {
        ScaleGrid g = make_scale_grid_raw(rmax_cap[i], rmax_cap[i] / 32.0, 4);
        SquareFunctionResult s = square_function(*mus[i], centers[i], g, true);
        CHECK(std::isfinite(s.smoothed_s2));
        CHECK(s.smoothed_s2 <= 10.0 * s.s2 + 1e-4);
    }

    // per-octave max |smoothed_delta| decays along octaves on the curved
    // rectifiable generators (the finite-measure analogue of the smoothed
    // difference vanishing at 0). The flat plane sits at the resolution
    // floor, where the statistic reads sampling noise instead of geometry.
    struct Case {
        const DiscreteMeasure* mu;
        std::vector<double> x;
        double r_top;
    };
    const Case cases[] = {{&circ, {circ.point(0)[0], circ.point(0)[1]}, 0.5},
                          {&graph, {graph.point(2500)[0], graph.point(2500)[1]}, 0.1}};
    for (const Case& cs : cases) {
        ScaleGrid g = make_scale_grid_raw(cs.r_top, cs.r_top / 64.0, 4);
        std::vector<double> omax(g.octave_count(), 0.0);
        for (int k = 0; k < g.weighted_count(); ++k) {
            const double v = std::abs(smoothed_delta(*cs.mu, cs.x, g.radii[k]));
            omax[k / g.per_octave] = std::max(omax[k / g.per_octave], v);
        }
        REQUIRE(omax.size() >= 4);
        for (size_t o = 1; o < omax.size(); ++o) CHECK(omax[o] <= 1.2 * omax[o - 1]);
        CHECK(omax.back() < omax.front());
    }
}
