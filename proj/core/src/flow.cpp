#include "hyprel/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace hyprel {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct NodeDerivs {
    std::vector<double> rp, rpp;  // central first/second differences, ghosts pinned to R0
};

NodeDerivs derivatives(const RadialCurveState& st) {
    const int n = st.n_interior();
    const double dth = st.dtheta();
    NodeDerivs d;
    d.rp.resize(n);
    d.rpp.resize(n);
    auto at = [&](int i) {
        if (i < 0 || i >= n) return st.radius0;
        return st.values[i];
    };
    for (int i = 0; i < n; ++i) {
        d.rp[i] = (at(i + 1) - at(i - 1)) / (2.0 * dth);
        d.rpp[i] = (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (dth * dth);
    }
    return d;
}

// Geodesic curvature against the outward normal:
//   k = -R sin(th) (R^2 + 2R'^2 - R R'') / W^3 + (R sin(th) - R' cos(th)) / W,
// W = sqrt(R^2 + R'^2). Grouped so that constant R gives exactly zero.
double curvature_at(double R, double Rp, double Rpp, double sinth, double costh) {
    const double W2 = R * R + Rp * Rp;
    const double W = std::sqrt(W2);
    const double kE = (R * R + 2.0 * Rp * Rp - R * Rpp) / (W2 * W);
    return -(R * sinth) * kE + (R * sinth - Rp * costh) / W;
}

// Thomas solve of the tridiagonal system (in place on rhs).
std::vector<double> solve_tridiag(const std::vector<double>& lower, const std::vector<double>& diag,
                                  const std::vector<double>& upper, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    std::vector<double> c(n);
    c[0] = upper[0] / diag[0];
    rhs[0] /= diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
    return rhs;
}

std::vector<double> clamp_grid_below_apex(const std::vector<double>& grid, double radius) {
    std::vector<double> out;
    for (double e : grid)
        if (e < 0.9 * radius) out.push_back(e);
    if (out.size() < 6) throw std::invalid_argument("flow entropy: eps grid too short");
    return out;
}

}  // namespace

double RadialCurveState::dtheta() const { return kPi / (n_interior() + 1); }

double RadialCurveState::band() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v - radius0));
    return m;
}

RadialCurveState make_radial_state(double center, double radius0, int n_interior,
                                   const std::function<double(double)>& R_of_theta) {
    if (!(radius0 > 0.0)) throw std::invalid_argument("make_radial_state: radius0 must be positive");
    if (n_interior < 8) throw std::invalid_argument("make_radial_state: grid too small");
    RadialCurveState st;
    st.center = center;
    st.radius0 = radius0;
    st.values.resize(n_interior);
    const double dth = kPi / (n_interior + 1);
    for (int i = 0; i < n_interior; ++i) {
        st.values[i] = R_of_theta(dth * (i + 1));
        if (!(st.values[i] > 0.0))
            throw std::invalid_argument("make_radial_state: radii must stay positive");
    }
    return st;
}

std::vector<double> curvature(const RadialCurveState& st) {
    for (double v : st.values)
        if (!(v > 0.0)) throw std::invalid_argument("curvature: invalid state (R <= 0)");
    const NodeDerivs d = derivatives(st);
    std::vector<double> k(st.n_interior());
    for (int i = 0; i < st.n_interior(); ++i) {
        const double th = st.theta(i);
        k[i] = curvature_at(st.values[i], d.rp[i], d.rpp[i], std::sin(th), std::cos(th));
    }
    return k;
}

RadialCurveState step(const RadialCurveState& st, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const int n = st.n_interior();
    const double dth = st.dtheta();
    const NodeDerivs d = derivatives(st);

    // dR/dt = sin th sqrt(W2) k  =  a(R, R') R'' + b(R, R'), with the R''
    // coefficient a = R^2 sin^2 / W2 taken implicitly.
    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    for (int i = 0; i < n; ++i) {
        const double th = st.theta(i);
        const double sinth = std::sin(th), costh = std::cos(th);
        const double R = st.values[i], Rp = d.rp[i];
        const double W2 = R * R + Rp * Rp;
        const double a = R * R * sinth * sinth / W2;
        const double b =
            sinth * (-(R * sinth) * ((R * R + 2.0 * Rp * Rp) / W2) + (R * sinth - Rp * costh));
        const double mu = dt * a / (dth * dth);
        lower[i] = -mu;
        diag[i] = 1.0 + 2.0 * mu;
        upper[i] = -mu;
        rhs[i] = R + dt * b;
        if (i == 0) rhs[i] += mu * st.radius0;
        if (i == n - 1) rhs[i] += mu * st.radius0;
    }
    std::vector<double> next = solve_tridiag(lower, diag, upper, std::move(rhs));

    double max_change = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(next[i]) || next[i] <= 0.0)
            throw StepRejectedError("step: state blew up", dt / 4.0);
        max_change = std::max(max_change, std::abs(next[i] - st.values[i]));
    }
    if (max_change > 0.25 * st.radius0)
        throw StepRejectedError("step: excessive change per step", dt / 4.0);

    RadialCurveState out = st;
    out.values = std::move(next);
    out.time = st.time + dt;
    return out;
}

double dissipation(const RadialCurveState& st) {
    const NodeDerivs d = derivatives(st);
    const std::vector<double> k = curvature(st);
    const double dth = st.dtheta();
    // integrand k^2 dmu vanishes at the pinned ends; trapezoid over theta
    double acc = 0.0;
    for (int i = 0; i < st.n_interior(); ++i) {
        const double th = st.theta(i);
        const double W = std::sqrt(st.values[i] * st.values[i] + d.rp[i] * d.rp[i]);
        acc += k[i] * k[i] * W / (st.values[i] * std::sin(th));
    }
    return acc * dth;
}

SampledImmersion immersion(const RadialCurveState& st) {
    const int n = st.n_interior();
    const double dth = st.dtheta();
    const double R0 = st.radius0;
    // node data with ghosts, plus second-order slopes for Hermite interpolation
    std::vector<double> R(n + 2), slope(n + 2);
    R[0] = R0;
    R[n + 1] = R0;
    for (int i = 0; i < n; ++i) R[i + 1] = st.values[i];
    for (int i = 1; i <= n; ++i) slope[i] = (R[i + 1] - R[i - 1]) / (2.0 * dth);
    slope[0] = (-3.0 * R[0] + 4.0 * R[1] - R[2]) / (2.0 * dth);
    slope[n + 1] = (3.0 * R[n + 1] - 4.0 * R[n] + R[n - 1]) / (2.0 * dth);

    SampledImmersion im;
    im.dimension = 1;
    im.u0 = 0.0;
    im.u1 = kPi;
    im.eval = [R = std::move(R), slope = std::move(slope), dth, c = st.center,
               n](double theta, double) {
        const int cells = n + 1;
        int k = std::min(cells - 1, std::max(0, static_cast<int>(theta / dth)));
        const double t = (theta - k * dth) / dth;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        const double Rv = h00 * R[k] + h10 * dth * slope[k] + h01 * R[k + 1] +
                          h11 * dth * slope[k + 1];
        const double dh00 = 6 * t * (t - 1) / dth;
        const double dh10 = (1 - 4 * t + 3 * t * t);
        const double dh01 = -6 * t * (t - 1) / dth;
        const double dh11 = (3 * t * t - 2 * t);
        const double Rp = dh00 * R[k] + dh10 * slope[k] + dh01 * R[k + 1] + dh11 * slope[k + 1];

        const double ct = std::cos(theta), sn = std::sin(theta);
        const double W = std::sqrt(Rv * Rv + Rp * Rp);
        SurfaceSample smp;
        smp.p = HalfSpacePoint(c + Rv * ct, Rv * sn);
        smp.normal = Vec{(Rv * ct + Rp * sn) / W, 0.0, (Rv * sn - Rp * ct) / W};
        smp.jacobian = W;
        return smp;
    };
    im.boundary = {"h2-endpoints", {st.center - R0, st.center + R0}};
    return im;
}

EntropyEstimate flow_entropy(const RadialCurveState& st, const FlowEntropyControls& ctl) {
    const GeodesicH2 background(st.center - st.radius0, st.center + st.radius0);
    const std::vector<double> grid =
        clamp_grid_below_apex(ctl.eps_grid.empty() ? default_eps_grid() : ctl.eps_grid,
                              st.radius0);
    const SampledImmersion im = immersion(st);
    QuadratureControls qc;
    qc.tol = ctl.quad_tol;
    const DefiningFunction height = DefiningFunction::height();

    std::vector<std::pair<double, double>> diffs;
    diffs.reserve(grid.size());
    for (double eps : grid)
        diffs.emplace_back(eps,
                           vol_eps(im, height, eps, qc).value - truncated_length_exact(background, eps));

    EntropyEstimate est = entropy_limit(diffs);
    // truncation-tail allowance for stopping the grid at eps_min
    const std::size_t m = diffs.size();
    est.error_bar += std::abs(diffs[m - 1].second - diffs[m - 2].second);
    return est;
}

FlowTrajectory run_flow(const RadialCurveState& initial, double t_end, const FlowControls& ctl) {
    if (!(t_end > 0.0)) throw std::invalid_argument("run_flow: t_end must be positive");
    const double dth = initial.dtheta();
    const double dt = ctl.dt_factor * dth * dth;
    const long steps = static_cast<long>(std::ceil(t_end / dt));
    const long stride = std::max(1L, steps / std::max(1, ctl.records));

    FlowTrajectory traj;
    traj.grid_n = initial.n_interior();
    traj.dt = dt;

    RadialCurveState st = initial;
    auto record = [&](const RadialCurveState& s) {
        const std::vector<double> k = curvature(s);
        double maxh = 0.0;
        for (double v : k) maxh = std::max(maxh, std::abs(v));
        const EntropyEstimate e = flow_entropy(s, ctl.entropy);
        traj.samples.push_back({s.time, e.value, e.error_bar, dissipation(s), maxh, s.band()});
        traj.states.push_back(s);
    };

    record(st);
    for (long m = 1; m <= steps; ++m) {
        st = step(st, dt);
        if (m % stride == 0 || m == steps) record(st);
    }
    return traj;
}

namespace {

std::size_t nearest_record(const FlowTrajectory& traj, double t) {
    if (traj.samples.empty()) throw std::invalid_argument("trajectory is empty");
    std::size_t best = 0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        if (std::abs(traj.samples[i].t - t) < std::abs(traj.samples[best].t - t)) best = i;
    return best;
}

double trapezoid_time(const FlowTrajectory& traj, std::size_t i0, std::size_t i1,
                      const std::vector<double>& vals) {
    double acc = 0.0;
    for (std::size_t i = i0; i + 1 <= i1; ++i)
        acc += 0.5 * (vals[i + 1 - i0] + vals[i - i0]) *
               (traj.samples[i + 1].t - traj.samples[i].t);
    return acc;
}

}  // namespace

IdentityResidual monotonicity_check(const FlowTrajectory& traj, double t, double s) {
    if (!(t < s)) throw std::invalid_argument("monotonicity_check: need t < s");
    const std::size_t i0 = nearest_record(traj, t);
    const std::size_t i1 = nearest_record(traj, s);
    if (i0 >= i1) throw std::invalid_argument("monotonicity_check: times collapse to one record");

    std::vector<double> diss;
    for (std::size_t i = i0; i <= i1; ++i) diss.push_back(traj.samples[i].dissipation);
    IdentityResidual r;
    r.total_dissipation = trapezoid_time(traj, i0, i1, diss);
    r.entropy_drop = traj.samples[i0].e_rel - traj.samples[i1].e_rel;
    r.absolute = std::abs(r.entropy_drop - r.total_dissipation);
    r.relative = r.absolute / std::max(r.total_dissipation, 1e-300);
    return r;
}

namespace {

// d_t f - Laplace f + Hess f(n, n) at (p, nu), hyperbolic Laplacian and
// Hessian, all derivatives by central differences.
double parabolic_weight(const AmbientField& f, const HalfSpacePoint& p, const Vec& nu, double t) {
    // step large enough that second differences stay above cancellation noise
    const double h = 1e-3 * std::max(p.y, 0.1);
    const double ht = 1e-5;
    auto F = [&](double dx, double dy, double dt_) {
        return f.value(HalfSpacePoint(p.x1 + dx, p.y + dy), t + dt_);
    };
    const double f0 = F(0, 0, 0);
    const double ft = (F(0, 0, ht) - F(0, 0, -ht)) / (2.0 * ht);
    const double fx = (F(h, 0, 0) - F(-h, 0, 0)) / (2.0 * h);
    const double fy = (F(0, h, 0) - F(0, -h, 0)) / (2.0 * h);
    const double fxx = (F(h, 0, 0) - 2.0 * f0 + F(-h, 0, 0)) / (h * h);
    const double fyy = (F(0, h, 0) - 2.0 * f0 + F(0, -h, 0)) / (h * h);
    const double fxy =
        (F(h, h, 0) - F(h, -h, 0) - F(-h, h, 0) + F(-h, -h, 0)) / (4.0 * h * h);

    const double y = p.y;
    const double lap = y * y * (fxx + fyy);
    const double hess_nn =
        y * y *
        ((fxx - fy / y) * nu.x1 * nu.x1 + 2.0 * (fxy + fx / y) * nu.x1 * nu.y +
         (fyy + fy / y) * nu.y * nu.y);
    return ft - lap + hess_nn;
}

}  // namespace

double sampled_field_norm(const AmbientField& f, double t, double y_min, double y_max,
                          double x_range) {
    if (!f.value) throw std::invalid_argument("sampled_field_norm: missing field");
    double acc = 0.0;
    for (int iy = 0; iy < 8; ++iy) {
        const double y = y_min * std::pow(y_max / y_min, iy / 7.0);
        const double h = 1e-4 * std::max(y, 0.05);
        for (int ix = 0; ix < 7; ++ix) {
            const double x = -x_range + 2.0 * x_range * ix / 6.0;
            auto F = [&](double dx, double dy, double dt_) {
                return f.value(HalfSpacePoint(x + dx, y + dy), t + dt_);
            };
            const double f0 = F(0, 0, 0);
            const double fx = (F(h, 0, 0) - F(-h, 0, 0)) / (2.0 * h);
            const double fy = (F(0, h, 0) - F(0, -h, 0)) / (2.0 * h);
            const double fxx = (F(h, 0, 0) - 2.0 * f0 + F(-h, 0, 0)) / (h * h);
            const double fyy = (F(0, h, 0) - 2.0 * f0 + F(0, -h, 0)) / (h * h);
            const double ft = (F(0, 0, 1e-5) - F(0, 0, -1e-5)) / 2e-5;
            const double ftx = (F(h, 0, 1e-5) - F(-h, 0, 1e-5) - F(h, 0, -1e-5) +
                                F(-h, 0, -1e-5)) /
                               (4.0 * h * 1e-5);
            acc = std::max(acc, std::abs(f0) + y * std::hypot(fx, fy) +
                                    y * y * (std::abs(fxx) + std::abs(fyy)) + std::abs(ft) +
                                    y * std::abs(ftx));
        }
    }
    return acc;
}

IdentityResidual weighted_monotonicity_check(const FlowTrajectory& traj, const AmbientField& f,
                                             double t, double s, const FlowEntropyControls& ctl) {
    if (!f.value) throw std::invalid_argument("weighted_monotonicity_check: missing field");
    if (!(t < s)) throw std::invalid_argument("weighted_monotonicity_check: need t < s");
    if (!std::isfinite(sampled_field_norm(f, t)))
        throw std::invalid_argument(
            "weighted_monotonicity_check: sampled field norms are not finite");
    const std::size_t i0 = nearest_record(traj, t);
    const std::size_t i1 = nearest_record(traj, s);
    if (i0 >= i1)
        throw std::invalid_argument("weighted_monotonicity_check: times collapse to one record");

    QuadratureControls qc;
    // the finite-differenced weights carry ~1e-8 noise; a tighter target
    // only makes the quadrature chase it
    qc.tol = std::max(ctl.quad_tol, 1e-8);
    const DefiningFunction height = DefiningFunction::height();

    auto weighted_entropy_at = [&](const RadialCurveState& st, bool parabolic) {
        const GeodesicH2 background(st.center - st.radius0, st.center + st.radius0);
        const SampledImmersion curve = immersion(st);
        const SampledImmersion geo = immersion(background);
        const std::vector<double> grid =
            clamp_grid_below_apex(ctl.eps_grid.empty() ? default_eps_grid() : ctl.eps_grid,
                                  st.radius0);
        SurfaceWeightFn psi;
        if (parabolic)
            psi = [&](const HalfSpacePoint& p, const Vec& nu) {
                return parabolic_weight(f, p, nu, st.time);
            };
        else
            psi = [&](const HalfSpacePoint& p, const Vec&) { return f.value(p, st.time); };
        std::vector<std::pair<double, double>> diffs;
        for (double eps : grid)
            diffs.emplace_back(eps, weighted_vol_eps(curve, height, eps, psi, qc).value -
                                        weighted_vol_eps(geo, height, eps, psi, qc).value);
        return entropy_limit(diffs).value;
    };

    // weighted dissipation and the parabolic entropy term at each record
    std::vector<double> wdiss, wpar;
    for (std::size_t i = i0; i <= i1; ++i) {
        const RadialCurveState& st = traj.states[i];
        const std::vector<double> k = curvature(st);
        const NodeDerivs d = derivatives(st);
        double acc = 0.0;
        for (int j = 0; j < st.n_interior(); ++j) {
            const double th = st.theta(j);
            const double W = std::sqrt(st.values[j] * st.values[j] + d.rp[j] * d.rp[j]);
            const HalfSpacePoint p(st.center + st.values[j] * std::cos(th),
                                   st.values[j] * std::sin(th));
            acc += f.value(p, st.time) * k[j] * k[j] * W / (st.values[j] * std::sin(th));
        }
        wdiss.push_back(acc * st.dtheta());
        wpar.push_back(weighted_entropy_at(st, /*parabolic=*/true));
    }

    IdentityResidual r;
    r.total_dissipation = trapezoid_time(traj, i0, i1, wdiss);
    const double parabolic_term = trapezoid_time(traj, i0, i1, wpar);
    r.entropy_drop =
        weighted_entropy_at(traj.states[i0], false) - weighted_entropy_at(traj.states[i1], false);
    // E_f(t) = E_f(s) + int f<H,H> - int E[.; d_t f - Lap f + Hess f(n,n)]
    r.absolute = std::abs(r.entropy_drop - r.total_dissipation + parabolic_term);
    r.relative = r.absolute / std::max({std::abs(r.total_dissipation), std::abs(parabolic_term),
                                        1e-300});
    return r;
}

NearBoundaryGraph make_graph(double a, double y_max, int nodes,
                             const std::function<double(double)>& u0_of_y) {
    if (nodes < 8) throw std::invalid_argument("make_graph: too few nodes");
    if (!(y_max > 0.0)) throw std::invalid_argument("make_graph: y_max must be positive");
    NearBoundaryGraph g;
    g.a = a;
    g.h = y_max / nodes;
    g.u.resize(nodes);
    for (int j = 0; j < nodes; ++j) g.u[j] = u0_of_y(g.h * (j + 1));
    return g;
}

NearBoundaryGraph graph_step(const NearBoundaryGraph& g, double dt) {
    const int m = static_cast<int>(g.u.size());
    const int active = m - 1;  // the last node is the frozen outer value
    const double h = g.h;

    auto at = [&](int j) {
        if (j < 0) return g.a;  // ghost at y = 0
        return g.u[j];
    };

    std::vector<double> lower(active), diag(active), upper(active), rhs(active);
    for (int j = 0; j < active; ++j) {
        const double y = g.y(j);
        const double du = (at(j + 1) - at(j - 1)) / (2.0 * h);
        const double mu = dt * y * y / (h * h * (1.0 + du * du));
        lower[j] = -mu;
        diag[j] = 1.0 + 2.0 * mu;
        upper[j] = -mu;
        rhs[j] = g.u[j] - dt * y * du;
        if (j == 0) rhs[j] += mu * g.a;
        if (j == active - 1) rhs[j] += mu * g.u[m - 1];
    }
    std::vector<double> next = solve_tridiag(lower, diag, upper, std::move(rhs));

    NearBoundaryGraph out = g;
    double max_change = 0.0, scale = std::abs(g.a) + 1.0;
    for (int j = 0; j < active; ++j) {
        if (!std::isfinite(next[j]))
            throw StepRejectedError("graph_step: state blew up", dt / 4.0);
        max_change = std::max(max_change, std::abs(next[j] - g.u[j]));
        scale = std::max(scale, std::abs(g.u[j]));
        out.u[j] = next[j];
    }
    if (max_change > 10.0 * scale)
        throw StepRejectedError("graph_step: excessive change per step", dt / 4.0);
    out.time = g.time + dt;
    return out;
}

double barrier_constant(const NearBoundaryGraph& g) {
    double c = 0.0;
    for (std::size_t j = 0; j < g.u.size(); ++j) {
        const double y = g.y(static_cast<int>(j));
        c = std::max(c, std::abs(g.u[j] - g.a) / (y * y));
    }
    return c;
}

ScalingTestResult graph_scaling_test(const NearBoundaryGraph& initial, double lambda,
                                     double t_end, double dt) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("graph_scaling_test: lambda must be in (0, 1]");
    if (!(dt > 0.0 && t_end >= dt)) throw std::invalid_argument("graph_scaling_test: bad times");

    NearBoundaryGraph g = initial;
    NearBoundaryGraph gl = initial;
    gl.a = initial.a / lambda;
    gl.h = initial.h / lambda;
    for (auto& v : gl.u) v /= lambda;

    ScalingTestResult res;
    res.barrier_initial = barrier_constant(g);
    res.barrier_max = res.barrier_initial;

    const long steps = static_cast<long>(std::llround(t_end / dt));
    for (long k = 0; k < steps; ++k) {
        g = graph_step(g, dt);
        gl = graph_step(gl, dt);
        res.barrier_max = std::max({res.barrier_max, barrier_constant(g)});
    }

    double sup = 0.0;
    for (std::size_t j = 0; j < g.u.size(); ++j)
        sup = std::max(sup, std::abs(g.u[j] / lambda - gl.u[j]));
    res.sup_difference = sup;
    return res;
}

void write_trajectory_csv(std::ostream& os, const FlowTrajectory& traj) {
    os << "t,E_rel,E_rel_error,dissipation,maxH,band\n";
    char buf[160];
    for (const auto& s : traj.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.e_rel,
                      s.e_rel_error, s.dissipation, s.max_h, s.band);
        os << buf;
    }
}

}  // namespace hyprel
