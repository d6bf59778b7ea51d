#include "hyprel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace hyprel {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1]; exact through degree 15.
constexpr double kGlNode[4] = {0.18343464249564980, 0.52553240991632899, 0.79666647741362674,
                               0.96028985649753623};
constexpr double kGlWeight[4] = {0.36268378337836198, 0.31370664587788729, 0.22238103445337447,
                                 0.10122853629037626};

struct EvalCounter {
    std::size_t used = 0;
    std::size_t cap = 0;
};

using Fn1 = std::function<double(double)>;

double gl8(const Fn1& f, double a, double b, EvalCounter& ec) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double dx = half * kGlNode[i];
        acc += kGlWeight[i] * (f(mid + dx) + f(mid - dx));
    }
    ec.used += 8;
    return acc * half;
}

struct Cell {
    double a, b;
    double whole;  // one-panel estimate
    double split;  // two-panel estimate (the value we report)
    double lhalf, rhalf;
    double err;  // |whole - split|, conservative for the two-panel value
};

Cell make_cell(const Fn1& f, double a, double b, double whole_known, bool have_whole,
               EvalCounter& ec) {
    Cell c;
    c.a = a;
    c.b = b;
    c.whole = have_whole ? whole_known : gl8(f, a, b, ec);
    const double m = 0.5 * (a + b);
    c.lhalf = gl8(f, a, m, ec);
    c.rhalf = gl8(f, m, b, ec);
    c.split = c.lhalf + c.rhalf;
    c.err = std::abs(c.whole - c.split);
    return c;
}

struct AdaptResult {
    double value = 0.0;
    double error_bound = 0.0;
};

// Globally adaptive refinement over a list of base intervals. Worst cell
// first; final sums are taken in parameter order with pairwise reduction.
AdaptResult adapt1d(const Fn1& f, const std::vector<std::pair<double, double>>& base, double tol,
                    EvalCounter& ec) {
    if (base.empty()) return {};

    auto cmp = [](const Cell& x, const Cell& y) { return x.err < y.err; };
    std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> queue(cmp);
    std::vector<Cell> frozen;

    double domain = 0.0;
    for (const auto& [a, b] : base) domain += b - a;
    const double width_floor = 1e-14 * std::max(domain, 1e-300);

    double queued_err = 0.0;
    auto push = [&](Cell&& c) {
        queued_err += c.err;
        queue.push(std::move(c));
    };

    for (const auto& [a, b] : base) {
        if (!(b > a)) continue;
        push(make_cell(f, a, b, 0.0, false, ec));
    }

    auto assemble = [&]() {
        std::vector<Cell> cells = frozen;
        auto q = queue;
        while (!q.empty()) {
            cells.push_back(q.top());
            q.pop();
        }
        std::sort(cells.begin(), cells.end(),
                  [](const Cell& x, const Cell& y) { return x.a < y.a; });
        std::vector<double> vals, errs;
        vals.reserve(cells.size());
        errs.reserve(cells.size());
        for (const Cell& c : cells) {
            vals.push_back(c.split);
            errs.push_back(c.err);
        }
        return AdaptResult{pairwise_sum(vals), pairwise_sum(errs)};
    };

    double frozen_err = 0.0;
    while (queued_err + frozen_err > tol && !queue.empty()) {
        if (ec.used + 64 > ec.cap) {
            const AdaptResult r = assemble();
            throw BudgetExceededError("quadrature: node budget exceeded", r.value, r.error_bound);
        }
        Cell worst = queue.top();
        queue.pop();
        queued_err -= worst.err;
        if (worst.b - worst.a < width_floor) {
            frozen_err += worst.err;
            frozen.push_back(worst);
            continue;
        }
        const double m = 0.5 * (worst.a + worst.b);
        push(make_cell(f, worst.a, m, worst.lhalf, true, ec));
        push(make_cell(f, m, worst.b, worst.rhalf, true, ec));
    }

    return assemble();
}

// Bisect a sign change of g down to floating-point resolution; the
// truncated integrand can be as large as 1/eps at the cut, so placement
// error must sit at machine scale.
double bisect_crossing(const Fn1& g, double lo, double hi, double glo, double domain,
                       EvalCounter& ec) {
    const double tol = 4.0 * std::numeric_limits<double>::epsilon();
    for (int it = 0;
         it < 200 && hi - lo > tol * std::max({std::abs(lo), std::abs(hi), 1e-3 * domain});
         ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        ec.used += 1;
        if ((gm >= 0.0) == (glo >= 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// All sign-change locations of g on [u0, u1], probed on a uniform grid with
// inward-nudged endpoints (the immersion domain is open).
std::vector<double> level_crossings(const Fn1& g, double u0, double u1, int probes,
                                    EvalCounter& ec) {
    const double width = u1 - u0;
    const double nudge = 1e-13 * width;
    std::vector<double> us(probes + 1), gs(probes + 1);
    for (int k = 0; k <= probes; ++k) {
        double u = u0 + width * k / probes;
        if (k == 0) u += nudge;
        if (k == probes) u -= nudge;
        us[k] = u;
        gs[k] = g(u);
    }
    ec.used += probes + 1;
    std::vector<double> out;
    for (int k = 0; k < probes; ++k) {
        if ((gs[k] >= 0.0) != (gs[k + 1] >= 0.0))
            out.push_back(bisect_crossing(g, us[k], us[k + 1], gs[k], width, ec));
    }
    return out;
}

// Base cells covering {inside >= 0}, with extra breakpoints used to align
// cell boundaries with the smoothness joints of a cutoff profile.
std::vector<std::pair<double, double>> inside_intervals(const Fn1& inside, double u0, double u1,
                                                        std::vector<double> breaks,
                                                        int initial_cells, EvalCounter& ec) {
    const double width = u1 - u0;
    auto crossings = level_crossings(inside, u0, u1, 2 * initial_cells, ec);
    breaks.insert(breaks.end(), crossings.begin(), crossings.end());
    breaks.push_back(u0);
    breaks.push_back(u1);
    std::sort(breaks.begin(), breaks.end());

    std::vector<std::pair<double, double>> cells;
    const double target = width / initial_cells;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        if (!(b - a > 1e-13 * width)) continue;
        const double gm = inside(0.5 * (a + b));
        ec.used += 1;
        if (gm < 0.0) continue;
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / target)));
        for (int k = 0; k < pieces; ++k)
            cells.emplace_back(a + (b - a) * k / pieces, a + (b - a) * (k + 1) / pieces);
    }
    return cells;
}

void check_sample(const SurfaceSample& smp) {
    if (!(smp.p.y > 0.0)) throw std::invalid_argument("immersion: nonpositive height at node");
    if (std::abs(smp.normal.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("immersion: normal is not unit at node");
}

// Shared driver: integrates weight(sample) * jacobian / y^dim over the
// region {region_signed(p) >= 0} (no region test when null). `joints` are
// level values of r_of_p at which cells must break.
QuadratureResult run_quadrature(const SampledImmersion& s,
                                const std::function<double(const SurfaceSample&)>& weight,
                                const std::function<double(const HalfSpacePoint&)>& region_signed,
                                const std::function<double(const HalfSpacePoint&)>& r_of_p,
                                const std::vector<double>& joints, bool reduce_rotational,
                                const QuadratureControls& ctl) {
    if (!s.eval) throw std::invalid_argument("immersion: missing evaluator");
    if (s.dimension != 1 && s.dimension != 2)
        throw std::invalid_argument("immersion: dimension must be 1 or 2");
    if (!(s.u1 > s.u0)) throw std::invalid_argument("immersion: empty parameter range");

    EvalCounter ec;
    ec.cap = ctl.node_budget;

    const int dim = s.dimension;
    const auto integrate_line = [&](double v, double tol) -> AdaptResult {
        const Fn1 f = [&, v](double u) {
            const SurfaceSample smp = s.eval(u, v);
            check_sample(smp);
            const double ypow = dim == 1 ? smp.p.y : smp.p.y * smp.p.y;
            return weight(smp) * smp.jacobian / ypow;
        };
        std::vector<std::pair<double, double>> base;
        if (region_signed) {
            std::vector<double> extra;
            for (double L : joints) {
                const Fn1 g = [&, v, L](double u) { return r_of_p(s.eval(u, v).p) - L; };
                auto cr = level_crossings(g, s.u0, s.u1, 2 * ctl.initial_cells, ec);
                extra.insert(extra.end(), cr.begin(), cr.end());
            }
            const Fn1 ins = [&, v](double u) { return region_signed(s.eval(u, v).p); };
            base = inside_intervals(ins, s.u0, s.u1, std::move(extra), ctl.initial_cells, ec);
        } else {
            for (int k = 0; k < ctl.initial_cells; ++k)
                base.emplace_back(s.u0 + (s.u1 - s.u0) * k / ctl.initial_cells,
                                  s.u0 + (s.u1 - s.u0) * (k + 1) / ctl.initial_cells);
        }
        return adapt1d(f, base, tol, ec);
    };

    if (dim == 1) {
        const AdaptResult r = integrate_line(0.0, ctl.tol);
        return {r.value, r.error_bound, ec.used};
    }

    const double v_span = s.v1 - s.v0;
    if (!(v_span > 0.0)) throw std::invalid_argument("immersion: empty secondary parameter range");

    if (reduce_rotational && s.rotational) {
        const AdaptResult r = integrate_line(0.5 * (s.v0 + s.v1), ctl.tol / v_span);
        return {r.value * v_span, r.error_bound * v_span, ec.used};
    }

    // Iterated quadrature: adaptive in v over cut line integrals in u.
    const double inner_tol = std::max(ctl.tol / (64.0 * v_span), 1e-13);
    const Fn1 outer = [&](double v) { return integrate_line(v, inner_tol).value; };
    std::vector<std::pair<double, double>> vbase;
    const int vcells = std::max(8, ctl.initial_cells / 4);
    for (int k = 0; k < vcells; ++k)
        vbase.emplace_back(s.v0 + v_span * k / vcells, s.v0 + v_span * (k + 1) / vcells);
    const AdaptResult r = adapt1d(outer, vbase, 0.5 * ctl.tol, ec);
    return {r.value, r.error_bound + 4.0 * inner_tol * v_span, ec.used};
}

}  // namespace

double smoothstep01(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * (3.0 - 2.0 * x);
}

CutoffProfile::CutoffProfile(double t1, double t2, double delta) : t1(t1), t2(t2), delta(delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("CutoffProfile: delta must be positive");
    if (!(t1 - delta > 0.0)) throw std::invalid_argument("CutoffProfile: need t1 - delta > 0");
    if (!(t1 <= t2)) throw std::invalid_argument("CutoffProfile: need t1 <= t2");
}

double CutoffProfile::operator()(double t) const {
    const double up = smoothstep01((t - (t1 - delta)) / delta);
    const double down = smoothstep01((t - t2) / delta);
    return up - down;
}

double pairwise_sum(const std::vector<double>& xs) {
    std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t lo,
                                                              std::size_t hi) -> double {
        if (hi - lo <= 8) {
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) acc += xs[i];
            return acc;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return xs.empty() ? 0.0 : rec(0, xs.size());
}

QuadratureResult vol_eps(const SampledImmersion& s, const DefiningFunction& r, double eps,
                         const QuadratureControls& ctl) {
    if (!(eps > 0.0)) throw std::invalid_argument("vol_eps: eps must be positive");
    if (!(ctl.tol > 0.0)) throw std::invalid_argument("vol_eps: tol must be positive");
    const auto weight = [](const SurfaceSample&) { return 1.0; };
    const auto inside = [&r, eps](const HalfSpacePoint& p) { return r(p) - eps; };
    return run_quadrature(s, weight, inside, nullptr, {}, r.rotationally_symmetric(), ctl);
}

QuadratureResult weighted_vol_eps(const SampledImmersion& s, const DefiningFunction& r, double eps,
                                  const SurfaceWeightFn& psi, const QuadratureControls& ctl,
                                  bool psi_rotation_invariant) {
    if (!(eps > 0.0)) throw std::invalid_argument("weighted_vol_eps: eps must be positive");
    if (!psi) throw std::invalid_argument("weighted_vol_eps: missing weight");
    const auto weight = [&psi](const SurfaceSample& smp) { return psi(smp.p, smp.normal); };
    const auto inside = [&r, eps](const HalfSpacePoint& p) { return r(p) - eps; };
    return run_quadrature(s, weight, inside, nullptr, {},
                          psi_rotation_invariant && r.rotationally_symmetric(), ctl);
}

QuadratureResult cutoff_vol(const SampledImmersion& s, const DefiningFunction& r,
                            const CutoffProfile& c, const QuadratureControls& ctl) {
    const auto weight = [&](const SurfaceSample& smp) { return c(r(smp.p)); };
    const auto inside = [&](const HalfSpacePoint& p) {
        const double rv = r(p);
        return std::min(rv - (c.t1 - c.delta), (c.t2 + c.delta) - rv);
    };
    const auto r_of_p = [&r](const HalfSpacePoint& p) { return r(p); };
    return run_quadrature(s, weight, inside, r_of_p, {c.t1 - c.delta, c.t1, c.t2, c.t2 + c.delta},
                          r.rotationally_symmetric(), ctl);
}

QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureControls& ctl) {
    if (!(b >= a)) throw std::invalid_argument("integrate_interval: need b >= a");
    EvalCounter ec;
    ec.cap = ctl.node_budget;
    std::vector<std::pair<double, double>> base;
    const int cells = std::max(1, ctl.initial_cells);
    for (int k = 0; k < cells; ++k)
        base.emplace_back(a + (b - a) * k / cells, a + (b - a) * (k + 1) / cells);
    const AdaptResult r = adapt1d(f, base, ctl.tol, ec);
    return {r.value, r.error_bound, ec.used};
}

}  // namespace hyprel
