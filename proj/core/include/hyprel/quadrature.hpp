#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hyprel/halfspace.hpp"

namespace hyprel {

// One evaluation of a parametrized hypersurface: ambient point, unit
// Euclidean normal, and the Euclidean area-element density.
struct SurfaceSample {
    HalfSpacePoint p;
    Vec normal;
    double jacobian;
};

// Identifies the asymptotic boundary of an immersion; two immersions are
// entropy-comparable only when these match exactly.
struct BoundaryDescriptor {
    std::string kind;          // "h2-endpoints", "circles", ...
    std::vector<double> data;  // sorted

    bool operator==(const BoundaryDescriptor&) const = default;
};

// Parametrized hypersurface handed to the quadrature engine.
//
// dimension 1: curve in the half-plane, parameter u in (u0, u1).
// dimension 2: surface patch with parameters (u, v); surfaces of revolution
// about the vertical axis through the origin set `rotational`, meaning
// heights, |x|, and the jacobian do not depend on v.
struct SampledImmersion {
    int dimension = 1;
    double u0 = 0.0, u1 = 1.0;
    double v0 = 0.0, v1 = 0.0;
    bool rotational = false;
    std::function<SurfaceSample(double u, double v)> eval;
    BoundaryDescriptor boundary;
};

// Smooth cutoff profile: 1 on [t1, t2], 0 outside [t1 - delta, t2 + delta],
// cubic smoothstep ramps with |derivative| <= 1.5/delta.
struct CutoffProfile {
    double t1, t2, delta;

    CutoffProfile(double t1, double t2, double delta);
    double operator()(double t) const;
};

/// Cubic smoothstep: 0 for x <= 0, 1 for x >= 1, 3x^2 - 2x^3 between.
double smoothstep01(double x);

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
    std::size_t nodes = 0;
};

struct QuadratureControls {
    double tol = 1e-9;
    std::size_t node_budget = std::size_t{1} << 20;
    int initial_cells = 64;
};

/// Truncated hyperbolic volume Vol_eps = integral of y^{-dim} over the
/// sub-level set {r >= eps}. The cut is located by bisection along
/// parameter lines; an empty truncated region yields value 0.
QuadratureResult vol_eps(const SampledImmersion& s, const DefiningFunction& r, double eps,
                         const QuadratureControls& ctl = {});

using SurfaceWeightFn = std::function<double(const HalfSpacePoint&, const Vec& unit_normal)>;

/// Weighted variant: integrates psi(p, v) y^{-dim} over {r >= eps}.
/// `psi_rotation_invariant` permits the reduced path on rotational surfaces
/// (psi must be invariant under simultaneous rotation of p and v).
QuadratureResult weighted_vol_eps(const SampledImmersion& s, const DefiningFunction& r, double eps,
                                  const SurfaceWeightFn& psi, const QuadratureControls& ctl = {},
                                  bool psi_rotation_invariant = false);

/// Smooth-cutoff variant: integrates phi(r(p)) y^{-dim} over the support of
/// the profile composed with r.
QuadratureResult cutoff_vol(const SampledImmersion& s, const DefiningFunction& r,
                            const CutoffProfile& c, const QuadratureControls& ctl = {});

/// Generic adaptive Gauss-Legendre integration of a smooth scalar function
/// over [a, b]; shared building block, also used by other modules.
QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureControls& ctl = {});

/// Deterministic pairwise (cascade) summation.
double pairwise_sum(const std::vector<double>& xs);

}  // namespace hyprel
