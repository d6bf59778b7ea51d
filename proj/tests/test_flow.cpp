#include <doctest.h>

#include <cmath>
#include <limits>

#include "hyprel/flow.hpp"

using namespace hyprel;

namespace {

constexpr double kPi = 3.14159265358979323846;

RadialCurveState bumped_state(int n, double amplitude) {
    return make_radial_state(0.0, 1.0, n, [amplitude](double th) {
        return 1.0 + amplitude * std::sin(th) * std::sin(th);
    });
}

}  // namespace

TEST_SUITE_BEGIN("flow");

TEST_CASE("curvature: geodesics are stationary, bumps restore") {
    const auto flat = make_radial_state(0.3, 2.0, 200, [](double) { return 2.0; });
    for (double k : curvature(flat)) CHECK(std::abs(k) <= 1e-12);

    const auto bump = bumped_state(199, 0.1);
    const auto k = curvature(bump);
    CHECK(k[99] < 0.0);  // apex node: outward bump is pushed back in

    const auto dent = bumped_state(199, -0.1);
    CHECK(curvature(dent)[99] > 0.0);

    auto bad = flat;
    bad.values[5] = -1.0;
    CHECK_THROWS_AS(curvature(bad), std::invalid_argument);
}

TEST_CASE("curvature: second-order grid convergence at the apex") {
    auto apex_curvature = [](int n) { return curvature(bumped_state(n, 0.1))[(n - 1) / 2]; };
    const double k1 = apex_curvature(99);
    const double k2 = apex_curvature(199);
    const double k4 = apex_curvature(399);
    const double e1 = std::abs(k1 - k4), e2 = std::abs(k2 - k4);
    CHECK(e1 / e2 > 3.0);  // halving the grid divides the error by ~4
    CHECK(e1 / e2 < 6.0);
}

TEST_CASE("first variation: one flow step dissipates length at rate k^2") {
    const auto st = bumped_state(400, 0.05);
    const auto im0 = immersion(st);
    const DefiningFunction height = DefiningFunction::height();
    const double eps = 1e-3;
    const double L0 = vol_eps(im0, height, eps, {.tol = 1e-11}).value;

    const double dt = 1e-6;
    const auto st1 = step(st, dt);
    const double L1 = vol_eps(immersion(st1), height, eps, {.tol = 1e-11}).value;

    const double rate = (L0 - L1) / dt;
    const double d = dissipation(st);
    CHECK(rate == doctest::Approx(d).epsilon(2e-2));
}

TEST_CASE("step: stationary state is an exact fixed point") {
    auto st = make_radial_state(0.0, 1.0, 150, [](double) { return 1.0; });
    const double dt = 0.25 * st.dtheta() * st.dtheta();
    for (int k = 0; k < 1000; ++k) st = step(st, dt);
    CHECK(st.band() <= 1e-12);
}

TEST_CASE("step: truncated length decreases, band never grows") {
    auto st = bumped_state(200, 0.1);
    const double dt = 0.25 * st.dtheta() * st.dtheta();
    const DefiningFunction height = DefiningFunction::height();
    double prev_len = vol_eps(immersion(st), height, 1e-3, {.tol = 1e-10}).value;
    double prev_band = st.band();
    for (int k = 0; k < 40; ++k) {
        st = step(st, dt);
        if (k % 10 == 9) {
            const double len = vol_eps(immersion(st), height, 1e-3, {.tol = 1e-10}).value;
            CHECK(len < prev_len);
            prev_len = len;
        }
        CHECK(st.band() <= prev_band + 1e-13);
        prev_band = st.band();
    }

    // a huge step on a strongly bent state moves the curve by more than the
    // stability monitor allows
    CHECK_THROWS_AS(step(bumped_state(200, 0.8), 10.0), StepRejectedError);
    try {
        step(bumped_state(200, 0.8), 10.0);
    } catch (const StepRejectedError& e) {
        CHECK(e.suggested_dt < 10.0);
    }
}

TEST_CASE("flow entropy: zero at the geodesic, positive for outward bumps") {
    const auto flat = make_radial_state(0.0, 1.0, 150, [](double) { return 1.0; });
    const auto e0 = flow_entropy(flat);
    CHECK(std::abs(e0.value) <= 1e-10);

    const auto bump = bumped_state(300, 0.08);
    const auto e1 = flow_entropy(bump);
    CHECK(e1.value > 0.0);  // the geodesic minimizes truncated length
    CHECK(e1.value > 10.0 * e1.error_bar);
}

TEST_CASE("run_flow: monotone entropy and the dissipation identity") {
    FlowControls ctl;
    ctl.records = 25;
    const auto traj = run_flow(bumped_state(200, 0.1), 0.5, ctl);
    REQUIRE(traj.samples.size() >= 10);

    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i)
        CHECK(traj.samples[i + 1].e_rel <= traj.samples[i].e_rel + 1e-8);

    const auto res = monotonicity_check(traj, traj.samples.front().t, traj.samples.back().t);
    CHECK(res.total_dissipation > 0.0);
    CHECK(res.relative <= 0.01);

    // the residual is driven by the trapezoid in time: refining the
    // sampling brings it down
    FlowControls fine = ctl;
    fine.records = 50;
    const auto traj2 = run_flow(bumped_state(200, 0.1), 0.5, fine);
    const auto res2 = monotonicity_check(traj2, traj2.samples.front().t, traj2.samples.back().t);
    CHECK(res2.absolute <= res.absolute + 1e-12);
}

TEST_CASE("weighted identity: f = 1 reduces to the plain check") {
    FlowControls ctl;
    ctl.records = 10;
    const auto traj = run_flow(bumped_state(120, 0.08), 0.2, ctl);
    const auto plain = monotonicity_check(traj, traj.samples.front().t, traj.samples.back().t);
    const AmbientField one{[](const HalfSpacePoint&, double) { return 1.0; }};
    const auto wres = weighted_monotonicity_check(traj, one, traj.samples.front().t,
                                                  traj.samples.back().t);
    CHECK(wres.absolute == doctest::Approx(plain.absolute).epsilon(1e-6));
    CHECK(wres.relative <= 0.01);
}

TEST_CASE("weighted identity: stationary flow with a bump weight") {
    FlowControls ctl;
    ctl.records = 5;
    const auto traj =
        run_flow(make_radial_state(0.0, 1.0, 100, [](double) { return 1.0; }), 0.05, ctl);
    const AmbientField bump{[](const HalfSpacePoint& p, double) {
        const double dx = p.x1;
        return std::exp(-4.0 * dx * dx);
    }};
    const auto res = weighted_monotonicity_check(traj, bump, traj.samples.front().t,
                                                 traj.samples.back().t);
    CHECK(res.absolute <= 1e-8);
}

TEST_CASE("weighted identity: bump weight along a perturbed run") {
    FlowControls ctl;
    ctl.records = 20;
    const auto traj = run_flow(bumped_state(200, 0.1), 0.3, ctl);
    const AmbientField bump{[](const HalfSpacePoint& p, double) {
        const double dx = p.x1;
        return 1.0 + 0.5 * std::exp(-4.0 * dx * dx);
    }};
    const auto res = weighted_monotonicity_check(traj, bump, traj.samples.front().t,
                                                 traj.samples.back().t);
    CHECK(res.relative <= 0.05);
}

TEST_CASE("sampled field norms gate the weighted identity") {
    const AmbientField bump{[](const HalfSpacePoint& p, double) {
        return std::exp(-p.x1 * p.x1);
    }};
    CHECK(std::isfinite(sampled_field_norm(bump, 0.0)));
    CHECK(sampled_field_norm(bump, 0.0) >= 1.0);

    // a field blowing up faster than every scaled derivative is refused
    const AmbientField bad{[](const HalfSpacePoint& p, double) { return 1.0 / (p.y * p.y); }};
    CHECK(sampled_field_norm(bad, 0.0) > 1e5);

    const AmbientField broken{[](const HalfSpacePoint& p, double) {
        return p.y < 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    }};
    FlowControls ctl;
    ctl.records = 3;
    const auto traj =
        run_flow(make_radial_state(0.0, 1.0, 64, [](double) { return 1.0; }), 0.01, ctl);
    CHECK_THROWS_AS(weighted_monotonicity_check(traj, broken, traj.samples.front().t,
                                                traj.samples.back().t),
                    std::invalid_argument);
}

TEST_CASE("near-boundary graph: constants, steps, barriers") {
    const auto g = make_graph(0.1, 1.0, 64, [](double) { return 0.1; });
    const auto g1 = graph_step(g, 1e-3);
    for (std::size_t j = 0; j < g.u.size(); ++j)
        CHECK(g1.u[j] == doctest::Approx(0.1).epsilon(1e-14));

    const auto gq = make_graph(0.1, 1.0, 64, [](double y) { return 0.1 + 0.3 * y * y; });
    CHECK(barrier_constant(gq) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("graph scaling invariance") {
    const auto g0 = make_graph(0.05, 1.0, 256, [](double y) { return 0.05 + 0.4 * y * y; });
    const double dt = 0.25 * g0.h;

    const auto trivial = graph_scaling_test(g0, 1.0, 0.05, dt);
    CHECK(trivial.sup_difference == 0.0);

    const auto res = graph_scaling_test(g0, 0.5, 0.05, dt);
    CHECK(res.sup_difference <= 1e-6);
    CHECK(res.barrier_max <= res.barrier_initial * (1.0 + 1e-9) + 1e-12);

    CHECK_THROWS_AS(graph_scaling_test(g0, 1.5, 0.05, dt), std::invalid_argument);
}

TEST_SUITE_END();
