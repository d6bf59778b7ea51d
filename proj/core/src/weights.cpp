#include "hyprel/weights.hpp"

#include <algorithm>
#include <cmath>

namespace hyprel {

namespace {

constexpr double kPi = 3.14159265358979323846;

SymMat eval_quad(const Weight& w, const HalfSpacePoint& p) {
    return w.quad ? w.quad(p) : SymMat::zero();
}

double eval_base(const Weight& w, const HalfSpacePoint& p) { return w.base ? w.base(p) : 0.0; }

// orthonormal tangent frame of S^n at unit v (n = sphere_dim)
std::vector<Vec> tangent_frame(const Vec& v, int sphere_dim) {
    if (sphere_dim == 1) {
        // the circle in the (x1, y) plane
        return {Vec{-v.y, 0.0, v.x1}};
    }
    Vec seed = std::abs(v.x1) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
    Vec t1 = seed - v * seed.dot(v);
    t1 = t1 / t1.norm();
    // v x t1
    Vec t2{v.x2 * t1.y - v.y * t1.x2, v.y * t1.x1 - v.x1 * t1.y, v.x1 * t1.x2 - v.x2 * t1.x1};
    return {t1, t2};
}

std::vector<Vec> sphere_grid(int sphere_dim, int n) {
    std::vector<Vec> out;
    out.reserve(n);
    if (sphere_dim == 1) {
        for (int k = 0; k < n; ++k) {
            const double th = 2.0 * kPi * k / n;
            out.push_back({std::cos(th), 0.0, std::sin(th)});
        }
        return out;
    }
    // Fibonacci sphere
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double th = golden * k;
        out.push_back({r * std::cos(th), r * std::sin(th), z});
    }
    return out;
}

}  // namespace

double Weight::operator()(const HalfSpacePoint& p, const Vec& v) const {
    double acc = eval_base(*this, p);
    if (quad) acc += quad(p).quad(v);
    return acc;
}

Vec Weight::sphere_gradient(const HalfSpacePoint& p, const Vec& v) const {
    if (!quad) return {};
    const Vec qv = quad(p).apply(v);
    return (qv - v * v.dot(qv)) * 2.0;
}

SurfaceWeightFn Weight::fn() const {
    return [w = *this](const HalfSpacePoint& p, const Vec& v) { return w(p, v); };
}

Weight Weight::constant(double c, int sphere_dim) {
    Weight w;
    w.sphere_dim = sphere_dim;
    w.base = [c](const HalfSpacePoint&) { return c; };
    w.rotation_invariant = true;
    return w;
}

Weight Weight::quadratic(const SymMat& Q, int sphere_dim, bool rotation_invariant) {
    Weight w;
    w.sphere_dim = sphere_dim;
    w.quad = [Q](const HalfSpacePoint&) { return Q; };
    w.rotation_invariant = rotation_invariant;
    return w;
}

Weight operator+(const Weight& a, const Weight& b) {
    if (a.sphere_dim != b.sphere_dim)
        throw std::invalid_argument("Weight: mismatched sphere dimensions");
    Weight w;
    w.sphere_dim = a.sphere_dim;
    w.rotation_invariant = a.rotation_invariant && b.rotation_invariant;
    w.base = [fa = a.base, fb = b.base](const HalfSpacePoint& p) {
        return (fa ? fa(p) : 0.0) + (fb ? fb(p) : 0.0);
    };
    if (a.quad || b.quad)
        w.quad = [qa = a.quad, qb = b.quad](const HalfSpacePoint& p) {
            return (qa ? qa(p) : SymMat::zero()) + (qb ? qb(p) : SymMat::zero());
        };
    return w;
}

Weight operator*(double s, const Weight& w) {
    Weight out;
    out.sphere_dim = w.sphere_dim;
    out.rotation_invariant = w.rotation_invariant;
    if (w.base) out.base = [s, f = w.base](const HalfSpacePoint& p) { return s * f(p); };
    if (w.quad) out.quad = [s, q = w.quad](const HalfSpacePoint& p) { return q(p) * s; };
    return out;
}

double x_norm_estimate(const Weight& w, const XNormSampleSpec& spec) {
    if (!(spec.y_min > 0.0 && spec.y_max > spec.y_min))
        throw std::invalid_argument("x_norm_estimate: bad height band");

    const auto vs = sphere_grid(w.sphere_dim, spec.n_sphere);

    double sup_psi = 0.0, sup_grad_s = 0.0, sup_hess_s = 0.0, sup_y_grad = 0.0,
           sup_y_grad_grad_s = 0.0;

    auto points = [&](auto&& visit) {
        for (int iy = 0; iy < spec.n_heights; ++iy) {
            const double t = spec.n_heights == 1 ? 0.0
                                                 : static_cast<double>(iy) / (spec.n_heights - 1);
            const double y = spec.y_min * std::pow(spec.y_max / spec.y_min, t);
            for (int i1 = 0; i1 < spec.n_x; ++i1) {
                const double x1 = spec.n_x == 1 ? 0.0
                                                : -spec.x_range + 2.0 * spec.x_range * i1 /
                                                                      (spec.n_x - 1);
                if (w.sphere_dim == 1) {
                    visit(HalfSpacePoint(x1, y));
                } else {
                    for (int i2 = 0; i2 < spec.n_x; ++i2) {
                        const double x2 = spec.n_x == 1 ? 0.0
                                                        : -spec.x_range + 2.0 * spec.x_range *
                                                                              i2 / (spec.n_x - 1);
                        visit(HalfSpacePoint(x1, x2, y));
                    }
                }
            }
        }
    };

    points([&](const HalfSpacePoint& p) {
        const double h = spec.fd_step * p.y;
        auto shifted = [&](int axis, double step) {
            return HalfSpacePoint(p.x1 + (axis == 0 ? step : 0.0), p.x2 + (axis == 1 ? step : 0.0),
                                  p.y + (axis == 2 ? step : 0.0));
        };
        const int n_axes = w.sphere_dim == 1 ? 2 : 3;
        const int axes[3] = {0, w.sphere_dim == 1 ? 2 : 1, 2};

        for (const Vec& v : vs) {
            sup_psi = std::max(sup_psi, std::abs(w(p, v)));

            const Vec gs = w.sphere_gradient(p, v);
            sup_grad_s = std::max(sup_grad_s, gs.norm());

            // sphere Hessian of the quadratic part in closed form
            const SymMat Q = eval_quad(w, p);
            const double vqv = Q.quad(v);
            const auto frame = tangent_frame(v, w.sphere_dim);
            if (frame.size() == 1) {
                const double hxx = 2.0 * (frame[0].dot(Q.apply(frame[0])) - vqv);
                sup_hess_s = std::max(sup_hess_s, std::abs(hxx));
            } else {
                const double h11 = 2.0 * (frame[0].dot(Q.apply(frame[0])) - vqv);
                const double h22 = 2.0 * (frame[1].dot(Q.apply(frame[1])) - vqv);
                const double h12 = 2.0 * frame[0].dot(Q.apply(frame[1]));
                const double mean = 0.5 * (h11 + h22);
                const double disc = std::sqrt(0.25 * (h11 - h22) * (h11 - h22) + h12 * h12);
                sup_hess_s = std::max({sup_hess_s, std::abs(mean + disc), std::abs(mean - disc)});
            }

            // ambient derivatives by height-scaled central differences
            double grad2 = 0.0, gradgs2 = 0.0;
            for (int k = 0; k < n_axes; ++k) {
                const int ax = axes[k];
                const double dpsi = (w(shifted(ax, h), v) - w(shifted(ax, -h), v)) / (2.0 * h);
                grad2 += dpsi * dpsi;
                const Vec dgs = (w.sphere_gradient(shifted(ax, h), v) -
                                 w.sphere_gradient(shifted(ax, -h), v)) /
                                (2.0 * h);
                gradgs2 += dgs.dot(dgs);
            }
            sup_y_grad = std::max(sup_y_grad, p.y * std::sqrt(grad2));
            sup_y_grad_grad_s = std::max(sup_y_grad_grad_s, p.y * std::sqrt(gradgs2));
        }
    });

    return sup_psi + sup_grad_s + sup_hess_s + sup_y_grad + sup_y_grad_grad_s;
}

QuadraticReduction quadratic_reduction(const Weight& w, const NormalField& background,
                                       double cutoff_eps) {
    if (!(cutoff_eps > 0.0))
        throw std::invalid_argument("quadratic_reduction: cutoff height must be positive");
    if (w.sphere_dim != 1)
        throw std::invalid_argument("quadratic_reduction: background field lives in the half-plane");

    auto y_psi = [w, background](const HalfSpacePoint& p) {
        return w.sphere_gradient(p, background.unit_direction(p));
    };

    Weight bar;
    bar.sphere_dim = w.sphere_dim;
    bar.base = w.base;
    bar.rotation_invariant = false;
    bar.quad = [w, background, cutoff_eps](const HalfSpacePoint& p) {
        SymMat q = eval_quad(w, p);
        const double fade = 1.0 - smoothstep01((p.y - 0.5 * cutoff_eps) / (0.5 * cutoff_eps));
        if (fade > 0.0) {
            const Vec u = background.unit_direction(p);
            const Vec y = w.sphere_gradient(p, u);
            q = q - SymMat::sym_outer(y, u) * fade;
        }
        return q;
    };
    return {std::move(y_psi), std::move(bar)};
}

WeightedEntropyResult weighted_entropy(const SampledImmersion& s1, const SampledImmersion& s2,
                                       const Weight& w, const DefiningFunction& r,
                                       const WeightedEntropyControls& ctl) {
    if (!(s1.boundary == s2.boundary))
        throw IncomparableConfigsError("weighted_entropy: asymptotic boundaries differ");

    const std::vector<double> grid = ctl.eps_grid.empty() ? default_eps_grid() : ctl.eps_grid;

    std::vector<std::pair<double, double>> plain, weighted;
    WeightedEntropyResult out;
    for (double eps : grid) {
        const auto a = vol_eps(s1, r, eps, ctl.quadrature);
        const auto b = vol_eps(s2, r, eps, ctl.quadrature);
        plain.emplace_back(eps, a.value - b.value);

        const auto wa =
            weighted_vol_eps(s1, r, eps, w.fn(), ctl.quadrature, w.rotation_invariant);
        const auto wb =
            weighted_vol_eps(s2, r, eps, w.fn(), ctl.quadrature, w.rotation_invariant);
        weighted.emplace_back(eps, wa.value - wb.value);
        out.diff_samples.push_back(
            {eps, wa.value - wb.value, wa.error_bound + wb.error_bound});
    }

    // unweighted entropy is the finiteness gate; throws when divergent
    const EntropyEstimate plain_est = entropy_limit(plain);
    out.unweighted_value = plain_est.value;

    out.estimate = entropy_limit(weighted);
    out.x_norm = x_norm_estimate(w);
    out.bound_ratio =
        std::abs(out.estimate.value) /
        ((std::abs(plain_est.value) + 1.0) * std::max(out.x_norm, 1e-300));
    return out;
}

}  // namespace hyprel
