#include <doctest.h>

#include <cmath>
#include <random>

#include "hyprel/halfspace.hpp"

using namespace hyprel;

namespace {

double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        const double lx = std::log(x), ly = std::log(std::abs(y));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_SUITE_BEGIN("halfspace");

TEST_CASE("point validation") {
    CHECK_THROWS_AS(HalfSpacePoint(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(HalfSpacePoint(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(HalfSpacePoint(0.0, 0.0, -0.5), std::invalid_argument);
    CHECK_NOTHROW(HalfSpacePoint(3.0, 1e-12));
}

TEST_CASE("conformal factor") {
    CHECK(conformal_factor(HalfSpacePoint(0.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(conformal_factor(HalfSpacePoint(0.0, 0.5)) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(conformal_factor(HalfSpacePoint(3.0, 0.1)) == doctest::Approx(100.0).epsilon(1e-13));
}

TEST_CASE("hyperbolic distance on a vertical line") {
    // d((0,1),(0,e)) = 1
    CHECK(hyperbolic_distance(HalfSpacePoint(0.0, 1.0), HalfSpacePoint(0.0, std::exp(1.0))) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("defining functions: kinds and limits") {
    const auto h = DefiningFunction::height();
    CHECK(h(HalfSpacePoint(7.0, 0.2)) == 0.2);

    // scaled: r/y -> 1/(1 + |x|^2) as y -> 0
    const auto sc = DefiningFunction::scaled(0.0, 0.0, 1.0);
    const HalfSpacePoint p(1.0, 1e-8);
    CHECK(sc(p) / p.y == doctest::Approx(0.5).epsilon(1e-12));

    // tilted with beta = 0 degenerates to the height
    const auto t0 = DefiningFunction::tilted(0.0);
    CHECK(t0(HalfSpacePoint(-2.0, 0.37)) == 0.37);

    CHECK_THROWS_AS(DefiningFunction::scaled(0.0, 0.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(DefiningFunction::tilted(1.0), std::invalid_argument);

    CHECK(DefiningFunction::height().rotationally_symmetric());
    CHECK(DefiningFunction::tilted(0.3).rotationally_symmetric());
    CHECK(DefiningFunction::scaled(0.0, 0.0, 1.0).rotationally_symmetric());
    CHECK_FALSE(DefiningFunction::scaled(0.5, 0.0, 1.0).rotationally_symmetric());
}

TEST_CASE("defining functions: comparability r/C <= y <= C r, C <= 4") {
    // sampled bounded region |x - center| <= 1.4, y <= 0.9, shipped ranges
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> ux(-1.4, 1.4), uy(1e-6, 0.9), ua(0.0, 1.0),
        ub(-0.5, 0.5);
    const double C = 4.0;
    for (int it = 0; it < 2000; ++it) {
        const double cx = 0.3;
        const HalfSpacePoint p(cx + ux(rng), uy(rng));
        for (const auto& r : {DefiningFunction::height(),
                              DefiningFunction::scaled(cx, 0.0, ua(rng)),
                              DefiningFunction::tilted(ub(rng))}) {
            const double rv = r(p);
            CHECK(rv > 0.0);
            CHECK(rv <= C * p.y * (1 + 1e-12));
            CHECK(p.y <= C * rv * (1 + 1e-12));
        }
    }
}

TEST_CASE("mobius maps: examples") {
    const MobiusMap id = MobiusMap::identity();
    const HalfSpacePoint p(0.7, 0.4);
    const auto q = id.apply(p);
    CHECK(q.x1 == doctest::Approx(p.x1).epsilon(1e-15));
    CHECK(q.y == doctest::Approx(p.y).epsilon(1e-15));

    CHECK(MobiusMap::translation(1.0).apply_boundary(0.0) == doctest::Approx(1.0));

    const auto d2 = MobiusMap::dilation(2.0);
    const auto dp = d2.apply(HalfSpacePoint(1.0, 1.0));
    CHECK(dp.x1 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(dp.y == doctest::Approx(2.0).epsilon(1e-15));

    CHECK_THROWS_AS(MobiusMap(1.0, 0.0, 0.0, -1.0), std::invalid_argument);
    // pole of z -> 1/(2 - z) ... map (0,1,-1,2): c z + d = 0 at z = 2
    const MobiusMap inv(0.0, 1.0, -1.0, 2.0);
    CHECK_THROWS_AS(inv.apply_boundary(2.0), MappedToInfinityError);
}

TEST_CASE("mobius maps: group structure and isometry") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> un(-2.0, 2.0), uh(0.05, 3.0);
    for (int it = 0; it < 300; ++it) {
        double a, b, c, d;
        do {
            a = un(rng);
            b = un(rng);
            c = un(rng);
            d = un(rng);
        } while (a * d - b * c <= 0.05);
        const MobiusMap m(a, b, c, d);
        const MobiusMap mi = m.inverse();
        const MobiusMap comp = m * mi;

        const HalfSpacePoint p(un(rng), uh(rng));
        const HalfSpacePoint q(un(rng), uh(rng));
        // composition with the inverse is the identity
        const auto pp = comp.apply(p);
        CHECK(pp.x1 == doctest::Approx(p.x1).epsilon(1e-9));
        CHECK(pp.y == doctest::Approx(p.y).epsilon(1e-9));
        // the action is isometric
        CHECK(hyperbolic_distance(m.apply(p), m.apply(q)) ==
              doctest::Approx(hyperbolic_distance(p, q)).epsilon(1e-12));
    }
}

TEST_CASE("normal field: closed-form values on the circle") {
    const NormalField nf(0.0, 1.0);
    for (double theta : {0.3, 0.9, 1.5707963267948966, 2.5}) {
        const HalfSpacePoint q(std::cos(theta), std::sin(theta));
        const Vec X = nf.field(q);
        CHECK(X.x1 == doctest::Approx(std::sin(theta) * std::cos(theta)).epsilon(1e-14));
        CHECK(X.y == doctest::Approx(std::sin(theta) * std::sin(theta)).epsilon(1e-14));
        const auto diag = nf.diagnostics(q);
        CHECK(diag.height_component ==
              doctest::Approx(std::sin(theta) * std::sin(theta)).epsilon(1e-14));
    }
    // apex normal is vertical
    const NormalField nf2(0.5, 2.0);
    const Vec X = nf2.field(HalfSpacePoint(0.5, 1.3));
    CHECK(X.x1 == doctest::Approx(0.0));
    CHECK(X.y == doctest::Approx(2.0).epsilon(1e-14));

    CHECK_THROWS_AS(nf.diagnostics(HalfSpacePoint(0.0, 1e-320)), std::exception);
}

TEST_CASE("normal field: divergence matches the closed form -R y/rho^2") {
    const double R = 1.0;
    const NormalField nf(0.0, R);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> uth(0.2, 2.9), ur(0.9, 1.1);
    for (int it = 0; it < 50; ++it) {
        const double theta = uth(rng), rad = ur(rng);
        const HalfSpacePoint q(rad * std::cos(theta), rad * std::sin(theta));
        const double rho2 = q.x1 * q.x1 + q.y * q.y;
        const double expected = -R * q.y / rho2;
        CHECK(nf.diagnostics(q).divergence_estimate ==
              doctest::Approx(expected).epsilon(1e-7));
    }
}

TEST_CASE("normal field: boundary rates") {
    // along the surface the height component decays exactly like y^2 / R
    const double R = 2.0;
    const NormalField nf(0.0, R);
    for (double y : {1e-2, 1e-3, 1e-4}) {
        const double theta = std::asin(y / R);
        const HalfSpacePoint q(R * std::cos(theta), y);
        CHECK(nf.diagnostics(q).height_component / (y * y) ==
              doctest::Approx(1.0 / R).epsilon(1e-12));
    }

    // log-log slopes on a nearby band curve: >= 1.9 for the height
    // component, >= 0.9 for the divergence
    const double off = 1.02 * R;
    std::vector<std::pair<double, double>> hc, dv;
    for (int k = 0; k < 12; ++k) {
        const double y = 1e-4 * std::pow(100.0, k / 11.0);
        const double theta = std::asin(y / off);
        const HalfSpacePoint q(off * std::cos(theta), y);
        const auto d = nf.diagnostics(q);
        hc.emplace_back(y, d.height_component);
        dv.emplace_back(y, d.divergence_estimate);
    }
    CHECK(loglog_slope(hc) >= 1.9);
    CHECK(loglog_slope(dv) >= 0.9);
}

TEST_SUITE_END();
