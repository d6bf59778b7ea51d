#include "hyprel/minimal.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>

namespace hyprel {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 3>;  // rho, y, alpha

void profile_ode(const State& x, State& dx, double) {
    dx[0] = std::cos(x[2]);
    dx[1] = std::sin(x[2]);
    dx[2] = profile_alpha_rate(x[0], x[1], x[2]);
}

constexpr double kPi = 3.14159265358979323846;
constexpr double kYFloorFactor = 1e-5;  // stored profiles reach down to this height (x r1)

struct IntegrationScales {
    double y_start, y_floor, rho_floor, escape, s_max;
};

IntegrationScales scales_for(double r1, double r2, const ShootingControls& ctl) {
    const double big = std::max(r1, r2);
    return {ctl.y_start_factor * r1, kYFloorFactor * r1, 1e-6 * r1, 64.0 * big,
            64.0 * big * kPi};
}

struct FlightOutcome {
    LandingTracePoint::Status status = LandingTracePoint::Status::Escaped;
    double landing_radius = 0.0;
    State event_state{};  // at y = y_start, descending
    double s_event = 0.0;
};

// Refine the asymptotic radius (and the cubic Taylor coefficient) from the
// profile state at a small height y_e on a descending branch.
struct LandingFit {
    double r, a3;
};

LandingFit fit_landing(double rho_e, double y_e, double alpha_e) {
    const double slope = std::cos(alpha_e) / std::sin(alpha_e);  // d rho / d y
    double r = rho_e, a3 = 0.0;
    for (int it = 0; it < 4; ++it) {
        const double a2 = -1.0 / (2.0 * r);
        const double a4 = -1.0 / (8.0 * r * r * r);
        a3 = (slope - 2.0 * a2 * y_e - 4.0 * a4 * y_e * y_e * y_e) / (3.0 * y_e * y_e);
        r = rho_e - a2 * y_e * y_e - a3 * y_e * y_e * y_e - a4 * y_e * y_e * y_e * y_e;
    }
    return {r, a3};
}

State series_start(const BoundaryTaylor& bt, double y_start) {
    const double rho = bt.rho(y_start);
    const double alpha = std::atan2(1.0, bt.drho(y_start));
    return {rho, y_start, alpha};
}

// Integrate one profile from its series start until it lands back at
// y = y_start, hits the axis, or leaves the scan box. When `samples` is
// given, the solution is stored at uniform arclength spacing ds.
FlightOutcome fly(double r1, double a3, const IntegrationScales& sc, const ShootingControls& ctl,
                  std::vector<ProfileSample>* samples = nullptr, double ds = 0.0) {
    FlightOutcome out;
    auto stepper =
        odeint::make_dense_output(ctl.abs_tol, ctl.rel_tol, odeint::runge_kutta_dopri5<State>());
    const State x0 = series_start(boundary_taylor(r1, a3), sc.y_start);
    stepper.initialize(x0, 0.0, 1e-4 * r1);

    const double arm_height = 1.5 * sc.y_start;
    bool armed = false;
    double next_sample = 0.0;

    auto record_until = [&](double t_hi) {
        if (!samples) return;
        State x;
        while (next_sample <= t_hi) {
            stepper.calc_state(next_sample, x);
            samples->push_back({next_sample, x[0], x[1], x[2]});
            next_sample += ds;
        }
    };

    while (true) {
        try {
            stepper.do_step(profile_ode);
        } catch (const std::exception&) {
            out.status = LandingTracePoint::Status::Escaped;
            return out;
        }
        const double t0 = stepper.previous_time();
        const double t1 = stepper.current_time();
        const State& x = stepper.current_state();

        if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || !std::isfinite(x[2])) {
            out.status = LandingTracePoint::Status::Escaped;
            return out;
        }
        if (x[1] > arm_height) armed = true;

        if (armed && x[1] < sc.y_start) {
            // bisect the landing time within the last step
            double lo = t0, hi = t1;
            State xs;
            for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(t1, 1.0); ++it) {
                const double mid = 0.5 * (lo + hi);
                stepper.calc_state(mid, xs);
                (xs[1] >= sc.y_start ? lo : hi) = mid;
            }
            const double t_land = 0.5 * (lo + hi);
            stepper.calc_state(t_land, xs);
            record_until(t_land);
            out.status = LandingTracePoint::Status::Landed;
            out.event_state = xs;
            out.s_event = t_land;
            out.landing_radius = fit_landing(xs[0], xs[1], xs[2]).r;
            return out;
        }
        if (x[0] < sc.rho_floor) {
            out.status = LandingTracePoint::Status::HitAxis;
            return out;
        }
        if (x[0] > sc.escape || x[1] > sc.escape || t1 > sc.s_max) {
            out.status = LandingTracePoint::Status::Escaped;
            return out;
        }
        record_until(t1);
    }
}

// Series extension of a profile below the ODE start height, sampled down to
// y_floor. `upward` distinguishes the rising inner end from the descending
// outer end; returned samples are s-ascending relative to s_ref.
std::vector<ProfileSample> series_tail(const BoundaryTaylor& bt, double y_floor, double y_start,
                                       double s_ref, bool upward, double ds) {
    const int n = std::max(4, static_cast<int>(std::ceil((y_start - y_floor) / ds)));
    std::vector<ProfileSample> out;
    out.reserve(n);
    // accumulate arclength away from the reference end, y_start -> y_floor
    double s = s_ref;
    double y_prev = y_start;
    for (int k = 1; k <= n; ++k) {
        const double y = y_start + (y_floor - y_start) * k / n;
        const double dmid = bt.drho(0.5 * (y + y_prev));
        const double dlen = std::abs(y_prev - y) * std::sqrt(1.0 + dmid * dmid);
        s += upward ? -dlen : dlen;
        const double slope = bt.drho(y);
        const double alpha = upward ? std::atan2(1.0, slope) : std::atan2(-1.0, -slope);
        out.push_back({s, bt.rho(y), y, alpha});
        y_prev = y;
    }
    if (upward) std::reverse(out.begin(), out.end());
    return out;
}

RevolutionSurface assemble_surface(double r1, double a3, const IntegrationScales& sc,
                                   const ShootingControls& ctl) {
    const double ds = ctl.sample_ds * r1;
    ShootingControls store = ctl;
    store.rel_tol = ctl.profile_rel_tol;
    store.abs_tol = ctl.profile_abs_tol;
    std::vector<ProfileSample> body;
    const FlightOutcome fl = fly(r1, a3, sc, store, &body, ds);
    if (fl.status != LandingTracePoint::Status::Landed)
        throw GeometryError("assemble_surface: profile did not land");

    const LandingFit outer = fit_landing(fl.event_state[0], fl.event_state[1], fl.event_state[2]);

    RevolutionSurface surf;
    surf.topology = RevolutionSurface::Topology::Annulus;
    surf.asymptotic_radii = {std::min(r1, outer.r), std::max(r1, outer.r)};
    surf.inner_a3 = a3;

    const BoundaryTaylor bt_in = boundary_taylor(r1, a3);
    auto head = series_tail(bt_in, sc.y_floor, sc.y_start, 0.0, /*upward=*/true, ds);
    BoundaryTaylor bt_out = boundary_taylor(outer.r, outer.a3);
    auto tail = series_tail(bt_out, sc.y_floor, fl.event_state[1], fl.s_event,
                            /*upward=*/false, ds);

    surf.profile = std::move(head);
    surf.profile.insert(surf.profile.end(), body.begin(), body.end());
    // the landing event sample itself
    surf.profile.push_back({fl.s_event, fl.event_state[0], fl.event_state[1], fl.event_state[2]});
    surf.profile.insert(surf.profile.end(), tail.begin(), tail.end());
    return surf;
}

template <typename F>
void parallel_over(int n, int threads, F&& f) {
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
    };
    std::vector<std::future<void>> pool;
    for (int t = 0; t < threads - 1; ++t) pool.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& fut : pool) fut.get();
}

}  // namespace

double profile_alpha_rate(double rho, double y, double alpha) {
    return -std::sin(alpha) / rho - 2.0 * std::cos(alpha) / y;
}

double BoundaryTaylor::rho(double y) const {
    double acc = 0.0;
    for (int k = order; k >= 0; --k) acc = acc * y + a[k];
    return acc;
}

double BoundaryTaylor::drho(double y) const {
    double acc = 0.0;
    for (int k = order; k >= 1; --k) acc = acc * y + k * a[k];
    return acc;
}

BoundaryTaylor boundary_taylor(double r0, double a3, int order) {
    if (!(r0 > 0.0)) throw std::invalid_argument("boundary_taylor: r0 must be positive");
    if (order < 2 || order > 4)
        throw std::invalid_argument("boundary_taylor: shipped recursion covers orders 2..4");
    BoundaryTaylor bt;
    bt.r0 = r0;
    bt.order = order;
    bt.a[0] = r0;
    bt.a[1] = 0.0;
    bt.a[2] = -1.0 / (2.0 * r0);
    if (order >= 3) bt.a[3] = a3;
    if (order >= 4) bt.a[4] = -1.0 / (8.0 * r0 * r0 * r0);
    return bt;
}

double RevolutionSurface::max_height() const {
    double m = 0.0;
    for (const auto& p : profile) m = std::max(m, p.y);
    return m;
}

double RevolutionSurface::s_at_max_height() const {
    double m = -1.0, s = 0.0;
    for (const auto& p : profile) {
        if (p.y > m) {
            m = p.y;
            s = p.s;
        }
    }
    return s;
}

ProfileSample RevolutionSurface::at(double s) const {
    if (profile.size() < 2) throw GeometryError("RevolutionSurface: profile too short");
    const double s_clamped = std::clamp(s, s_min(), s_max());
    auto it = std::upper_bound(profile.begin(), profile.end(), s_clamped,
                               [](double v, const ProfileSample& p) { return v < p.s; });
    const std::size_t hi = std::min<std::size_t>(
        std::max<std::size_t>(1, static_cast<std::size_t>(it - profile.begin())),
        profile.size() - 1);
    const ProfileSample& p0 = profile[hi - 1];
    const ProfileSample& p1 = profile[hi];
    const double h = p1.s - p0.s;
    if (!(h > 0.0)) return p0;
    const double t = (s_clamped - p0.s) / h;

    // cubic Hermite with the tangent data carried by each sample
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    auto hermite = [&](double v0, double d0, double v1, double d1) {
        return h00 * v0 + h10 * h * d0 + h01 * v1 + h11 * h * d1;
    };
    ProfileSample out;
    out.s = s_clamped;
    out.rho = hermite(p0.rho, std::cos(p0.alpha), p1.rho, std::cos(p1.alpha));
    out.y = hermite(p0.y, std::sin(p0.alpha), p1.y, std::sin(p1.alpha));
    out.alpha = hermite(p0.alpha, profile_alpha_rate(p0.rho, p0.y, p0.alpha), p1.alpha,
                        profile_alpha_rate(p1.rho, p1.y, p1.alpha));
    return out;
}

LandingTracePoint shoot_once(double r1, double a3, const ShootingControls& ctl) {
    const IntegrationScales sc = scales_for(r1, r1, ctl);
    const FlightOutcome fl = fly(r1, a3, sc, ctl);
    LandingTracePoint p;
    p.a3 = a3;
    p.status = fl.status;
    p.landing_radius = fl.landing_radius;
    return p;
}

ShootingResult shoot_catenoid(double r1, double r2, const ShootingControls& ctl) {
    if (!(r1 > 0.0)) throw std::invalid_argument("shoot_catenoid: r1 must be positive");
    const double ratio = r2 / r1;
    if (!(ratio > 1.0 && ratio <= 4.0))
        throw std::invalid_argument("shoot_catenoid: scan range covers 1 < r2/r1 <= 4");

    const IntegrationScales sc = scales_for(r1, r2, ctl);
    ShootingResult result;

    auto landing_at = [&](double a3) {
        const FlightOutcome fl = fly(r1, a3, sc, ctl);
        LandingTracePoint p;
        p.a3 = a3;
        p.status = fl.status;
        p.landing_radius = fl.landing_radius;
        return p;
    };
    // roots are refined on the same tight integration used to store the
    // surfaces, so the assembled radii meet the target consistently
    ShootingControls tight = ctl;
    tight.rel_tol = ctl.profile_rel_tol;
    tight.abs_tol = ctl.profile_abs_tol;
    auto landing_tight = [&](double a3) {
        const FlightOutcome fl = fly(r1, a3, sc, tight);
        LandingTracePoint p;
        p.a3 = a3;
        p.status = fl.status;
        p.landing_radius = fl.landing_radius;
        return p;
    };

    // scan, expanding the parameter box until the target is bracketed
    double halfwidth = ctl.initial_halfwidth;
    std::vector<LandingTracePoint> trace;
    std::vector<std::pair<double, double>> brackets;
    while (true) {
        trace.assign(ctl.scan_points, {});
        parallel_over(ctl.scan_points, ctl.threads, [&](int i) {
            const double a3 = -halfwidth + 2.0 * halfwidth * i / (ctl.scan_points - 1);
            trace[i] = landing_at(a3);
        });
        brackets.clear();
        for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
            const auto& p = trace[i];
            const auto& q = trace[i + 1];
            if (p.status != LandingTracePoint::Status::Landed ||
                q.status != LandingTracePoint::Status::Landed)
                continue;
            if ((p.landing_radius - r2) * (q.landing_radius - r2) <= 0.0)
                brackets.emplace_back(p.a3, q.a3);
        }
        if (!brackets.empty() || halfwidth >= ctl.max_halfwidth) break;
        halfwidth *= 2.0;
    }
    result.trace = std::move(trace);
    result.scan_halfwidth = halfwidth;

    for (auto [lo, hi] : brackets) {
        double flo = landing_tight(lo).landing_radius - r2;
        for (int it = 0; it < 200 && hi - lo > ctl.bisect_tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            const LandingTracePoint pm = landing_tight(mid);
            if (pm.status != LandingTracePoint::Status::Landed)
                throw GeometryError("shoot_catenoid: landing map not defined inside a bracket");
            const double fm = pm.landing_radius - r2;
            if ((fm >= 0.0) == (flo >= 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        result.roots.push_back(0.5 * (lo + hi));
    }

    // dedupe near-identical roots from adjacent brackets
    std::sort(result.roots.begin(), result.roots.end());
    result.roots.erase(std::unique(result.roots.begin(), result.roots.end(),
                                   [&](double x, double y) {
                                       return std::abs(x - y) < 16.0 * ctl.bisect_tol;
                                   }),
                       result.roots.end());

    for (double a3 : result.roots) result.surfaces.push_back(assemble_surface(r1, a3, sc, ctl));
    return result;
}

double hemisphere_vol_eps(double R, double eps) {
    if (!(R > 0.0)) throw std::invalid_argument("hemisphere_vol_eps: R must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("hemisphere_vol_eps: eps must be positive");
    if (!(eps < R)) throw EmptyTruncationError("hemisphere_vol_eps: cut at or above the pole");
    return 2.0 * kPi * (R / eps - 1.0);
}

RevolutionSurface hemisphere_surface(double R, double sample_ds) {
    if (!(R > 0.0)) throw std::invalid_argument("hemisphere_surface: R must be positive");
    RevolutionSurface surf;
    surf.topology = RevolutionSurface::Topology::Disk;
    surf.asymptotic_radii = {R};
    surf.inner_a3 = 0.0;
    const double t0 = std::asin(kYFloorFactor);  // start height 1e-5 R
    // stop just short of the pole: the revolution parametrization (and the
    // principal-curvature ratio sin(alpha)/rho) degenerates at rho = 0
    const double t1 = 0.5 * kPi - 1e-8;
    const int n = std::max(8, static_cast<int>(std::ceil(R * (t1 - t0) / (sample_ds * R))));
    surf.profile.reserve(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double t = t0 + (t1 - t0) * k / n;
        surf.profile.push_back({R * t, R * std::cos(t), R * std::sin(t), 0.5 * kPi + t});
    }
    return surf;
}

double mean_curvature_h(const RevolutionSurface& surf, double s) {
    const ProfileSample p = surf.at(s);
    // independent plug-in: alpha' from the interpolant (five-point stencil),
    // not from the shooting field
    double gap = surf.s_max() - surf.s_min();
    double h = std::max(1e-6 * gap, 0.5 * gap / static_cast<double>(surf.profile.size()));
    h = std::min({h, 0.5 * (s - surf.s_min()), 0.5 * (surf.s_max() - s)});
    if (!(h > 0.0)) h = 1e-6 * gap;
    auto a = [&](double t) { return surf.at(t).alpha; };
    const double dalpha =
        (-a(s + 2.0 * h) + 8.0 * a(s + h) - 8.0 * a(s - h) + a(s - 2.0 * h)) / (12.0 * h);
    return p.y * (dalpha + std::sin(p.alpha) / p.rho) + 2.0 * std::cos(p.alpha);
}

double alexakis_mazzeo_area(const RevolutionSurface& s, const QuadratureControls& ctl) {
    const double chi = s.topology == RevolutionSurface::Topology::Disk ? 1.0 : 0.0;

    const auto integrand = [&](double u) {
        const ProfileSample p = s.at(u);
        const double ap = profile_alpha_rate(p.rho, p.y, p.alpha);
        const double k1 = p.y * ap + std::cos(p.alpha);
        const double k2 = p.y * std::sin(p.alpha) / p.rho + std::cos(p.alpha);
        const double ahat2 = 0.5 * (k1 - k2) * (k1 - k2);  // |trace-free A|^2
        return ahat2 * p.rho / (p.y * p.y);
    };

    const double whole = integrate_interval(integrand, s.s_min(), s.s_max(), ctl).value;

    // tail test: the part of the integral below a small height must be
    // negligible, otherwise the curvature integral is not converging
    const double y_tail = 100.0 * kYFloorFactor * s.asymptotic_radii.front();
    double s_lo = s.s_min(), s_hi = s.s_max();
    {
        // advance each end inward until y exceeds the tail height
        const double step = (s.s_max() - s.s_min()) / 4096.0;
        while (s_lo < s_hi && s.at(s_lo).y < y_tail) s_lo += step;
        while (s_hi > s_lo && s.at(s_hi).y < y_tail) s_hi -= step;
    }
    const double inner = integrate_interval(integrand, s_lo, s_hi, ctl).value;
    const double tail = std::abs(whole - inner);
    if (!(tail <= std::max(1e-6, 1e-4 * std::abs(whole))))
        throw NonconvergentIntegralError("alexakis_mazzeo_area: curvature tail too large");

    return -2.0 * kPi * chi - 0.5 * 2.0 * kPi * whole;
}

namespace {

// rho on the profile at a given height, on the rising (inner) or the
// descending (outer) branch, by bisection on the interpolated profile.
double rho_at_height(const RevolutionSurface& surf, double yq, bool inner) {
    const double s_apex = surf.s_at_max_height();
    double lo = inner ? surf.s_min() : s_apex;
    double hi = inner ? s_apex : surf.s_max();
    double ylo = surf.at(lo).y, yhi = surf.at(hi).y;
    if (!((yq - ylo) * (yq - yhi) <= 0.0))
        throw GeometryError("separation_rate: height not reachable on the profile branch");
    for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-14 * (surf.s_max() - surf.s_min()); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double ym = surf.at(mid).y;
        if ((ym >= yq) == (ylo >= yq)) {
            lo = mid;
            ylo = ym;
        } else {
            hi = mid;
        }
    }
    return surf.at(0.5 * (lo + hi)).rho;
}

}  // namespace

SeparationRate separation_rate(const RevolutionSurface& s1, const RevolutionSurface& s2) {
    if (s1.topology != s2.topology)
        throw GeometryError("separation_rate: boundary multiplicities differ");
    if (s1.asymptotic_radii.size() != s2.asymptotic_radii.size())
        throw GeometryError("separation_rate: boundary multiplicities differ");
    const double scale = s1.asymptotic_radii.front();
    for (std::size_t i = 0; i < s1.asymptotic_radii.size(); ++i)
        if (std::abs(s1.asymptotic_radii[i] - s2.asymptotic_radii[i]) > 1e-6 * scale)
            throw GeometryError("separation_rate: asymptotic circles differ");

    const bool annulus = s1.topology == RevolutionSurface::Topology::Annulus;
    const int n_heights = 25;
    SeparationRate out;
    for (int k = 0; k < n_heights; ++k) {
        const double yq =
            scale * 1e-3 * std::pow(100.0, static_cast<double>(k) / (n_heights - 1));
        double d = std::abs(rho_at_height(s1, yq, true) - rho_at_height(s2, yq, true));
        if (annulus)
            d = std::max(d, std::abs(rho_at_height(s1, yq, false) - rho_at_height(s2, yq, false)));
        out.samples.emplace_back(yq, d);
    }

    double dmax = 0.0;
    for (const auto& [y, d] : out.samples) dmax = std::max(dmax, d);
    if (dmax <= 1e-12 * scale) {
        out.exact_coincidence = true;
        return out;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [y, d] : out.samples) {
        const double lx = std::log(y), ly = std::log(std::max(d, 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(out.samples.size());
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return out;
}

SampledImmersion immersion(const RevolutionSurface& s) {
    SampledImmersion im;
    im.dimension = 2;
    im.u0 = s.s_min();
    im.u1 = s.s_max();
    im.v0 = 0.0;
    im.v1 = 2.0 * kPi;
    im.rotational = true;
    im.eval = [surf = s](double u, double v) {
        const ProfileSample p = surf.at(u);
        const double cv = std::cos(v), sv = std::sin(v);
        const double ca = std::cos(p.alpha), sa = std::sin(p.alpha);
        SurfaceSample smp;
        smp.p = HalfSpacePoint(p.rho * cv, p.rho * sv, p.y);
        smp.normal = Vec{-sa * cv, -sa * sv, ca};
        smp.jacobian = p.rho;
        return smp;
    };
    im.boundary = {"circles", s.asymptotic_radii};
    return im;
}

void write_landing_trace_csv(std::ostream& os, const std::vector<LandingTracePoint>& trace) {
    os << "a3,landing_radius,status\n";
    char buf[96];
    for (const auto& p : trace) {
        const char* status = p.status == LandingTracePoint::Status::Landed    ? "landed"
                             : p.status == LandingTracePoint::Status::HitAxis ? "hit-axis"
                                                                              : "escaped";
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", p.a3,
                      p.status == LandingTracePoint::Status::Landed ? p.landing_radius : 0.0);
        os << buf << status << "\n";
    }
}

void write_profile_csv(std::ostream& os, const RevolutionSurface& s) {
    os << "s,rho,y\n";
    char buf[96];
    for (const auto& p : s.profile) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.s, p.rho, p.y);
        os << buf;
    }
}

}  // namespace hyprel
