#include <doctest.h>

#include <cmath>
#include <random>

#include "hyprel/geodesics.hpp"

using namespace hyprel;

TEST_SUITE_BEGIN("geodesics");

TEST_CASE("truncated length: closed form against the quadrature oracle") {
    // oracle: integral of dtheta/sin(theta) over the cut, both evaluated
    // independently to 30 digits; frozen value for (0,1), eps = 0.1
    const GeodesicH2 g(0.0, 1.0);
    CHECK(truncated_length_exact(g, 0.1) ==
          doctest::Approx(4.5848633391223554).epsilon(1e-14));

    // decreasing in eps, -> 0 at the apex cut
    double prev = truncated_length_exact(g, 1e-4);
    for (double eps : {1e-3, 1e-2, 0.1, 0.3, 0.49}) {
        const double v = truncated_length_exact(g, eps);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(truncated_length_exact(g, 0.5 * (1.0 - 1e-12)) ==
          doctest::Approx(0.0).epsilon(1e-5));
    CHECK_THROWS_AS(truncated_length_exact(g, 0.5), EmptyTruncationError);
    CHECK_THROWS_AS(truncated_length_exact(g, 0.7), EmptyTruncationError);
}

TEST_CASE("truncated length: log-divergent parts cancel in differences") {
    // L(0,2) - L(0,1) -> 2 ln 2 as eps -> 0
    const GeodesicH2 g2(0.0, 2.0), g1(0.0, 1.0);
    const double eps = 1e-6;
    CHECK(truncated_length_exact(g2, eps) - truncated_length_exact(g1, eps) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-10));

    // L(g, eps) - 2 ln(1/eps) -> 2 ln(b - a)
    const GeodesicH2 g3(0.0, 3.0);
    CHECK(truncated_length_exact(g3, 1e-7) - 2.0 * std::log(1.0 / 1e-7) ==
          doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("cross ratio") {
    CHECK(cross_ratio(0, 1, 2, 4) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(cross_ratio(0, 1, 2, 3) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(cross_ratio(0, 2, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(cross_ratio(0, 0, 1, 2), std::invalid_argument);

    // value lies in (0, 1); Mobius invariance on sampled quadruples
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int it = 0; it < 200; ++it) {
        std::array<double, 4> a{u(rng), u(rng), u(rng), u(rng)};
        std::sort(a.begin(), a.end());
        if (a[1] - a[0] < 1e-3 || a[2] - a[1] < 1e-3 || a[3] - a[2] < 1e-3) continue;
        const double cr = cross_ratio(a[0], a[1], a[2], a[3]);
        CHECK(cr > 0.0);
        CHECK(cr < 1.0);

        const MobiusMap m = MobiusMap::translation(u(rng)) * MobiusMap::dilation(1.7) *
                            MobiusMap(1.0, 0.0, 0.2, 1.0);  // pole at -5
        std::array<double, 4> b;
        for (int i = 0; i < 4; ++i) b[i] = m.apply_boundary(a[i]);
        std::sort(b.begin(), b.end());
        CHECK(cross_ratio(b[0], b[1], b[2], b[3]) == doctest::Approx(cr).epsilon(1e-10));
    }
}

TEST_CASE("relative entropy: appendix value and structure") {
    const auto c1 = GeodesicConfig::from_pairs({{0, 1}, {2, 4}});
    const auto c2 = GeodesicConfig::from_pairs({{0, 2}, {1, 4}});
    CHECK(relative_entropy_exact(c1, c2) ==
          doctest::Approx(2.0 * std::log(1.0 / 3.0)).epsilon(1e-14));
    CHECK(relative_entropy_exact(c1, c1) == 0.0);
    CHECK(relative_entropy_exact(c2, c1) ==
          doctest::Approx(-relative_entropy_exact(c1, c2)).epsilon(1e-15));

    const auto c3 = GeodesicConfig::from_pairs({{0, 4}, {1, 2}});
    // cocycle identity telescopes exactly
    CHECK(relative_entropy_exact(c1, c2) + relative_entropy_exact(c2, c3) +
              relative_entropy_exact(c3, c1) ==
          doctest::Approx(0.0).epsilon(1e-14));

    const auto other = GeodesicConfig::from_pairs({{0, 1}, {2, 5}});
    CHECK_THROWS_AS(relative_entropy_exact(c1, other), IncomparableConfigsError);

    CHECK_THROWS_AS(GeodesicConfig::from_pairs({{0, 1}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("enumerate pairings: table of permuted cross ratios") {
    const auto t = enumerate_pairings({0, 1, 2, 4});
    CHECK(t.entropy[0][1] == doctest::Approx(2.0 * std::log(1.0 / 3.0)).epsilon(1e-14));
    CHECK(t.entropy[1][0] == doctest::Approx(-2.0 * std::log(1.0 / 3.0)).epsilon(1e-14));
    for (int i = 0; i < 3; ++i) {
        CHECK(t.entropy[i][i] == 0.0);
        for (int j = 0; j < 3; ++j)
            CHECK(t.entropy[i][j] == doctest::Approx(-t.entropy[j][i]).epsilon(1e-14));
    }
    // 3-cycle sums vanish
    CHECK(t.entropy[0][1] + t.entropy[1][2] + t.entropy[2][0] ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(enumerate_pairings({0, 2, 1, 3}), std::invalid_argument);
}

TEST_CASE("relative entropy: Mobius invariance of the exact value") {
    const auto c1 = GeodesicConfig::from_pairs({{0, 1}, {2, 4}});
    const auto c2 = GeodesicConfig::from_pairs({{0, 2}, {1, 4}});
    const double e = relative_entropy_exact(c1, c2);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 50; ++it) {
        // keep the pole away from the endpoint hull [0, 4]
        const MobiusMap m = MobiusMap::translation(u(rng)) *
                            MobiusMap::dilation(0.5 + 1.5 * std::abs(u(rng))) *
                            MobiusMap(1.0, 0.0, 0.15 * u(rng), 1.0);
        CHECK(relative_entropy_exact(mobius_image(m, c1), mobius_image(m, c2)) ==
              doctest::Approx(e).epsilon(1e-10));
    }
}

TEST_CASE("numeric entropy agrees with the exact oracle for any r") {
    const auto c1 = GeodesicConfig::from_pairs({{0, 1}, {2, 4}});
    const auto c2 = GeodesicConfig::from_pairs({{0, 2}, {1, 4}});
    const double exact = relative_entropy_exact(c1, c2);
    for (const auto& r : {DefiningFunction::height(), DefiningFunction::tilted(0.3)}) {
        const auto est = numeric_relative_entropy(c1, c2, r);
        CHECK(std::abs(est.value - exact) <= 1e-4);
        CHECK(std::abs(est.value - exact) <= est.error_bar + 1e-6);
    }

    const auto other = GeodesicConfig::from_pairs({{0, 1}, {2, 5}});
    CHECK_THROWS_AS(numeric_relative_entropy(c1, other, DefiningFunction::height()),
                    IncomparableConfigsError);
}

TEST_CASE("mobius image rejects endpoints at the pole") {
    const auto c = GeodesicConfig::from_pairs({{0, 1}, {2, 4}});
    const MobiusMap m(0.0, 1.0, -1.0, 2.0);  // pole at x = 2, inside the hull
    CHECK_THROWS_AS(mobius_image(m, c), MappedToInfinityError);
}

TEST_CASE("geodesic parametrization satisfies the implicit equation") {
    const GeodesicH2 g(-0.7, 2.1);
    for (double th : {0.1, 0.7, 1.3, 2.2, 3.0}) {
        const auto p = g.at_angle(th);
        CHECK(p.y * p.y + (p.x1 - g.a) * (p.x1 - g.b) == doctest::Approx(0.0).epsilon(1e-12));
    }
    const auto im = immersion(g);
    CHECK(im.dimension == 1);
    CHECK(im.boundary.kind == "h2-endpoints");
    const auto smp = im.eval(1.0, 0.0);
    CHECK(smp.normal.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(smp.jacobian == doctest::Approx(g.radius()).epsilon(1e-15));
}

TEST_SUITE_END();
