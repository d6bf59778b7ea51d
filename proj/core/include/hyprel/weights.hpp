#pragma once

#include <functional>
#include <optional>

#include "hyprel/expansion.hpp"
#include "hyprel/halfspace.hpp"
#include "hyprel/quadrature.hpp"

namespace hyprel {

// Admissible weight psi(p, v) = f0(p) + v . Q(p) v over position x unit
// normal. The quadratic-form representation makes evenness structural and
// the sphere calculus exact; an optional near-boundary cutoff factor enters
// through the reduced weight produced by quadratic_reduction.
struct Weight {
    int sphere_dim = 1;  // normals live on S^n in R^{n+1}
    std::function<double(const HalfSpacePoint&)> base;  // f0; null means 0
    std::function<SymMat(const HalfSpacePoint&)> quad;  // Q;  null means 0
    bool rotation_invariant = false;  // invariant under simultaneous rotation of p and v

    double operator()(const HalfSpacePoint& p, const Vec& v) const;

    /// Sphere gradient of psi(p, .) at unit v: 2 (Q v - (v . Q v) v).
    Vec sphere_gradient(const HalfSpacePoint& p, const Vec& v) const;

    SurfaceWeightFn fn() const;

    static Weight constant(double c, int sphere_dim);
    static Weight quadratic(const SymMat& Q, int sphere_dim, bool rotation_invariant = false);
};

Weight operator+(const Weight& a, const Weight& b);
Weight operator*(double s, const Weight& w);

struct XNormSampleSpec {
    double y_min = 1e-4, y_max = 1.0;
    int n_heights = 20;       // log-spaced heights
    double x_range = 2.0;     // boundary coordinates in [-x_range, x_range]
    int n_x = 5;
    int n_sphere = 32;
    double fd_step = 1e-5;    // ambient finite-difference step, relative to y
};

/// Sampled estimate (a lower bound) of the five-term norm
/// ||psi|| + ||grad_S psi|| + ||grad_S grad_S psi|| + ||y grad psi|| +
/// ||y grad grad_S psi||; sphere derivatives in closed form, ambient ones
/// by height-scaled central differences.
double x_norm_estimate(const Weight& w, const XNormSampleSpec& spec = {});

struct QuadraticReduction {
    std::function<Vec(const HalfSpacePoint&)> y_psi;  // sphere gradient at the extension normal
    Weight psi_bar;
};

/// Subtracts the quadratic term (Y_psi . v)(u . v), faded in below the
/// cutoff height, where u is the unit normal extension of the background;
/// the sphere gradient of the result vanishes at v = u wherever the fade
/// factor is 1 (heights below cutoff_eps / 2).
QuadraticReduction quadratic_reduction(const Weight& w, const NormalField& background,
                                       double cutoff_eps = 0.2);

struct WeightedEntropyResult {
    EntropyEstimate estimate;
    double unweighted_value = 0.0;
    double x_norm = 0.0;
    double bound_ratio = 0.0;  // |E_w| / ((|E| + 1) ||psi||), diagnostic only
    std::vector<EpsSample> diff_samples;
};

struct WeightedEntropyControls {
    std::vector<double> eps_grid;  // empty = default grid
    QuadratureControls quadrature{};
};

/// Extrapolated weighted relative entropy of two immersions with equal
/// asymptotic boundary. The unweighted entropy is computed first as the
/// finiteness gate.
WeightedEntropyResult weighted_entropy(const SampledImmersion& s1, const SampledImmersion& s2,
                                       const Weight& w, const DefiningFunction& r,
                                       const WeightedEntropyControls& ctl = {});

}  // namespace hyprel
