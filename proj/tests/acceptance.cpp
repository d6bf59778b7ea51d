// Acceptance suite: end-to-end checks of the shipped claims, one line per
// criterion, every tolerance pinned here. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hyprel/expansion.hpp"
#include "hyprel/flow.hpp"
#include "hyprel/geodesics.hpp"
#include "hyprel/minimal.hpp"
#include "hyprel/weights.hpp"

using namespace hyprel;

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

int g_failures = 0;

void report(int id, const std::string& what, bool pass, double value, double threshold) {
    std::printf("[%s] criterion %2d: %s (value %.6g, threshold %.6g)\n", pass ? "PASS" : "FAIL",
                id, what.c_str(), value, threshold);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& [x, y] : pts) {
        if (!(std::abs(y) > 0.0)) continue;
        const double lx = std::log(x), ly = std::log(std::abs(y));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

const ShootingResult& catenoid_pair() {
    static const ShootingResult shot = [] {
        ShootingControls ctl;
        return shoot_catenoid(1.0, 2.0, ctl);
    }();
    return shot;
}

// 1. Appendix oracle: numeric entropy of the (0,1,2,4) pairings.
void criterion_1() {
    const double t0 = now_seconds();
    const auto table = enumerate_pairings({0.0, 1.0, 2.0, 4.0});
    const auto est = numeric_relative_entropy(table.configs[0], table.configs[1],
                                              DefiningFunction::height());
    const double exact = 2.0 * std::log(1.0 / 3.0);  // -2.197224577
    const double dt = now_seconds() - t0;
    report(1, "appendix oracle |numeric - 2 ln(1/3)|", std::abs(est.value - exact) <= 1e-6,
           std::abs(est.value - exact), 1e-6);
    report(1, "appendix oracle runtime [s]", dt < 5.0, dt, 5.0);
}

// 2. Defining-function invariance across Height / Scaled / Tilted.
void criterion_2() {
    const auto table = enumerate_pairings({0.0, 1.0, 2.0, 4.0});
    const std::array<DefiningFunction, 3> rs{DefiningFunction::height(),
                                             DefiningFunction::scaled(0.0, 0.0, 1.0),
                                             DefiningFunction::tilted(0.3)};
    const double exact = relative_entropy_exact(table.configs[0], table.configs[1]);

    std::array<double, 3> vals{};
    double worst_exact = 0.0;
    for (int i = 0; i < 3; ++i) {
        vals[i] =
            numeric_relative_entropy(table.configs[0], table.configs[1], rs[i]).value;
        worst_exact = std::max(worst_exact, std::abs(vals[i] - exact));
    }
    double dev = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) dev = std::max(dev, std::abs(vals[i] - vals[j]));
    report(2, "geodesic invariance pairwise deviation", dev <= 1e-4, dev, 1e-4);
    report(2, "geodesic invariance against the exact value", worst_exact <= 1e-4, worst_exact,
           1e-4);

    // the same independence for the catenoid pair
    const auto& shot = catenoid_pair();
    if (shot.surfaces.size() < 2) {
        report(2, "catenoid pair exists", false, static_cast<double>(shot.surfaces.size()), 2.0);
        return;
    }
    const auto im1 = immersion(shot.surfaces[0]);
    const auto im2 = immersion(shot.surfaces[1]);
    std::array<double, 3> cv{};
    for (int i = 0; i < 3; ++i) {
        std::vector<std::pair<double, double>> diffs;
        for (double eps : default_eps_grid())
            diffs.emplace_back(eps, vol_eps(im1, rs[i], eps, {.tol = 1e-9}).value -
                                        vol_eps(im2, rs[i], eps, {.tol = 1e-9}).value);
        cv[i] = entropy_limit(diffs).value;
    }
    double cdev = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) cdev = std::max(cdev, std::abs(cv[i] - cv[j]));
    report(2, "catenoid invariance pairwise deviation", cdev <= 1e-4, cdev, 1e-4);
}

// 3. Mobius invariance of the numeric entropy for 10 sampled maps.
void criterion_3() {
    const auto table = enumerate_pairings({0.0, 1.0, 2.0, 4.0});
    const auto& c1 = table.configs[0];
    const auto& c2 = table.configs[1];
    const double base =
        numeric_relative_entropy(c1, c2, DefiningFunction::height()).value;

    // ten maps with the pole kept away from [0, 4]
    std::vector<MobiusMap> maps;
    for (int k = 0; k < 5; ++k) {
        maps.push_back(MobiusMap::translation(0.3 * (k + 1)) * MobiusMap::dilation(0.6 + 0.2 * k));
        maps.push_back(MobiusMap(1.0, 0.2 * k, 0.05 + 0.02 * k, 1.0) *
                       MobiusMap::translation(-0.1 * k));
    }
    double worst = 0.0;
    for (const auto& m : maps) {
        const double e = numeric_relative_entropy(mobius_image(m, c1), mobius_image(m, c2),
                                                  DefiningFunction::height())
                             .value;
        worst = std::max(worst, std::abs(e - base));
    }
    report(3, "Mobius invariance over 10 maps", worst <= 1e-6, worst, 1e-6);
}

// 4. Hemisphere expansion: c0 = 2 pi R, renormalized area -2 pi.
void criterion_4() {
    const double R = 1.0;
    const auto im = immersion(hemisphere_surface(R));
    std::vector<std::pair<double, double>> samples;
    for (double eps : default_eps_grid(0.3, 1e-3))
        samples.emplace_back(eps, vol_eps(im, DefiningFunction::height(), eps, {.tol = 1e-9}).value);
    const auto fit = fit_expansion(samples, 2);
    const double c0_rel = std::abs(fit.power_coefficients[0] - kTwoPi * R) / (kTwoPi * R);
    const double area_err = std::abs(fit.constant_term - (-kTwoPi));
    report(4, "hemisphere c0 relative error", c0_rel <= 1e-6, c0_rel, 1e-6);
    report(4, "hemisphere renormalized area vs -2 pi", area_err <= 1e-3, area_err, 1e-3);
}

// 5. Catenoid renormalized areas: curvature route vs expansion route, and
// the entropy as the difference of renormalized areas.
void criterion_5() {
    const auto& shot = catenoid_pair();
    if (shot.surfaces.size() < 2) {
        report(5, "catenoid pair exists", false, static_cast<double>(shot.surfaces.size()), 2.0);
        return;
    }
    std::vector<double> c2s, residuals;
    double worst_rel = 0.0;
    for (const auto& surf : shot.surfaces) {
        std::vector<std::pair<double, double>> samples;
        const auto im = immersion(surf);
        for (double eps : default_eps_grid())
            samples.emplace_back(eps,
                                 vol_eps(im, DefiningFunction::height(), eps, {.tol = 1e-9}).value);
        const auto fit = fit_expansion(samples, 2);
        const double am = alexakis_mazzeo_area(surf);
        c2s.push_back(fit.constant_term);
        residuals.push_back(fit.residual_norm);
        worst_rel = std::max(worst_rel, std::abs(fit.constant_term - am) / std::abs(am));
    }
    report(5, "Gauss-Bonnet area identity (relative)", worst_rel <= 1e-2, worst_rel, 1e-2);

    const auto im1 = immersion(shot.surfaces[0]);
    const auto im2 = immersion(shot.surfaces[1]);
    std::vector<std::pair<double, double>> diffs;
    for (double eps : default_eps_grid())
        diffs.emplace_back(eps, vol_eps(im1, DefiningFunction::height(), eps, {.tol = 1e-9}).value -
                                    vol_eps(im2, DefiningFunction::height(), eps, {.tol = 1e-9})
                                        .value);
    const auto est = entropy_limit(diffs);
    const double via_fits = c2s[0] - c2s[1];
    const double combined = est.error_bar + 3.0 * (residuals[0] + residuals[1]) + 1e-8;
    report(5, "entropy equals renormalized-area difference",
           std::abs(est.value - via_fits) <= combined, std::abs(est.value - via_fits), combined);
}

// 6. Separation rate of the catenoid pair.
void criterion_6() {
    const auto& shot = catenoid_pair();
    if (shot.surfaces.size() < 2) {
        report(6, "catenoid pair exists", false, static_cast<double>(shot.surfaces.size()), 2.0);
        return;
    }
    const auto rate = separation_rate(shot.surfaces[0], shot.surfaces[1]);
    report(6, "separation log-log slope in [2.7, 3.3]",
           rate.slope >= 2.7 && rate.slope <= 3.3, rate.slope, 3.0);
}

// 7. Mean curvature flow reference run.
void criterion_7() {
    const double t0 = now_seconds();
    const auto initial = make_radial_state(0.0, 1.0, 400, [](double th) {
        return 1.0 + 0.1 * std::sin(th) * std::sin(th);
    });
    FlowControls ctl;
    ctl.records = 100;
    const auto traj = run_flow(initial, 2.0, ctl);

    double worst_increase = -1e300;
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i)
        worst_increase =
            std::max(worst_increase, traj.samples[i + 1].e_rel - traj.samples[i].e_rel);
    report(7, "entropy nonincreasing along the reference run", worst_increase <= 1e-8,
           worst_increase, 1e-8);

    const auto res = monotonicity_check(traj, traj.samples.front().t, traj.samples.back().t);
    report(7, "dissipation identity relative residual", res.relative <= 0.01, res.relative, 0.01);

    auto st = make_radial_state(0.0, 1.0, 400, [](double) { return 1.0; });
    const double dt = 0.25 * st.dtheta() * st.dtheta();
    for (int k = 0; k < 1000; ++k) st = step(st, dt);
    report(7, "stationary state preserved over 1000 steps", st.band() <= 1e-12, st.band(), 1e-12);

    const double dt_wall = now_seconds() - t0;
    report(7, "reference run wall time [s]", dt_wall < 60.0, dt_wall, 60.0);
}

// 8. Scaling invariance of the near-boundary graph flow.
void criterion_8() {
    const auto g0 = make_graph(0.05, 1.0, 256, [](double y) { return 0.05 + 0.4 * y * y; });
    const auto res = graph_scaling_test(g0, 0.5, 0.05, 0.25 * g0.h);
    report(8, "graph scaling sup-difference (lambda = 1/2)", res.sup_difference <= 1e-6,
           res.sup_difference, 1e-6);
    const double barrier_growth = res.barrier_max - res.barrier_initial * (1.0 + 1e-9);
    report(8, "quadratic barrier preserved", barrier_growth <= 1e-12, barrier_growth, 1e-12);
}

// 9. Weighted relative entropy on the appendix configurations.
void criterion_9() {
    const auto table = enumerate_pairings({0.0, 1.0, 2.0, 4.0});
    const auto s1 = config_immersion(table.configs[0]);
    const auto s2 = config_immersion(table.configs[1]);
    const DefiningFunction height = DefiningFunction::height();
    WeightedEntropyControls ctl;
    ctl.quadrature.tol = 1e-9;
    ctl.quadrature.initial_cells = 64;

    const auto one = weighted_entropy(s1, s2, Weight::constant(1.0, 1), height, ctl);
    report(9, "unit weight reduces exactly",
           one.estimate.value == one.unweighted_value,
           std::abs(one.estimate.value - one.unweighted_value), 0.0);

    SymMat Qy = SymMat::zero();
    Qy.m[2][2] = 1.0;
    SymMat Qx = SymMat::zero();
    Qx.m[0][0] = 1.0;
    const Weight w1 = Weight::quadratic(Qy, 1);
    const Weight w2 = Weight::quadratic(Qx, 1);
    const auto e1 = weighted_entropy(s1, s2, w1, height, ctl);
    const auto e2 = weighted_entropy(s1, s2, w2, height, ctl);
    const auto mix = weighted_entropy(s1, s2, 0.7 * w1 + 0.3 * w2, height, ctl);
    const double lin =
        std::abs(mix.estimate.value - (0.7 * e1.estimate.value + 0.3 * e2.estimate.value));
    report(9, "linearity in the weight", lin <= 1e-8, lin, 1e-8);

    // reduction invariant on the first geodesic of the configuration
    const GeodesicH2 g = table.configs[0].geodesics.front();
    const NormalField field(g.center(), g.radius());
    const auto red = quadratic_reduction(w1, field, 0.2);
    double worst = 0.0;
    for (int k = 1; k <= 30; ++k) {
        const double theta = 0.003 * k;
        for (double off : {0.97, 1.0, 1.03}) {
            const double rr = g.radius() * off;
            const HalfSpacePoint q(g.center() + rr * std::cos(theta), rr * std::sin(theta));
            if (q.y >= 0.1) continue;
            worst = std::max(worst, red.psi_bar.sphere_gradient(q, field.unit_direction(q)).norm());
        }
    }
    report(9, "reduction gradient invariant", worst <= 1e-10, worst, 1e-10);

    std::vector<std::pair<double, double>> tails;
    for (const auto& s : e1.diff_samples)
        tails.emplace_back(s.eps, s.value - e1.estimate.value);
    const double slope = loglog_slope(tails);
    report(9, "weighted truncation-tail slope", slope >= 1.0, slope, 1.0);
}

// 10. Normal extension field bounds.
void criterion_10() {
    const double R = 1.0;
    const NormalField field(0.0, R);
    const double off = 1.02 * R;
    std::vector<std::pair<double, double>> hc, dv;
    for (int k = 0; k < 14; ++k) {
        const double y = 1e-4 * std::pow(300.0, k / 13.0);
        const double theta = std::asin(y / off);
        const HalfSpacePoint q(off * std::cos(theta), y);
        const auto d = field.diagnostics(q);
        hc.emplace_back(y, d.height_component);
        dv.emplace_back(y, d.divergence_estimate);
    }
    const double s_h = loglog_slope(hc);
    const double s_d = loglog_slope(dv);
    report(10, "height-component slope", s_h >= 1.9, s_h, 1.9);
    report(10, "divergence slope", s_d >= 0.9, s_d, 0.9);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d check(s) FAILED\n", g_failures);
    return g_failures;
}
