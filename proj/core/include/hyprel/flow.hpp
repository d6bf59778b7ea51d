#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyprel/expansion.hpp"
#include "hyprel/geodesics.hpp"
#include "hyprel/quadrature.hpp"

namespace hyprel {

// Radial graph over a background geodesic semicircle: the curve
// theta -> center + R(theta) (cos theta, sin theta) on a uniform interior
// grid, pinned to R = radius0 at both ideal ends.
struct RadialCurveState {
    double center = 0.0;
    double radius0 = 1.0;
    std::vector<double> values;  // R_i at theta_i = (i+1) pi / (N+1)
    double time = 0.0;

    int n_interior() const { return static_cast<int>(values.size()); }
    double dtheta() const;
    double theta(int i) const { return dtheta() * (i + 1); }
    /// max_i |R_i - radius0|
    double band() const;
};

RadialCurveState make_radial_state(double center, double radius0, int n_interior,
                                   const std::function<double(double)>& R_of_theta);

/// Hyperbolic geodesic curvature per node, signed against the outward
/// normal; identically zero exactly when R is constant, negative where the
/// curve bulges outward. Moving each point with this normal speed is the
/// steepest descent of hyperbolic length.
std::vector<double> curvature(const RadialCurveState& state);

/// Semi-implicit step: the second-order term implicit with lagged
/// coefficients, everything else explicit; Dirichlet ends. Throws
/// StepRejectedError (with a suggested dt) on a stability violation.
RadialCurveState step(const RadialCurveState& state, double dt);

/// Grid dissipation integral of squared curvature, trapezoid in theta.
double dissipation(const RadialCurveState& state);

struct FlowEntropyControls {
    std::vector<double> eps_grid;  // empty = default grid clamped below the apex
    double quad_tol = 1e-10;
};

/// Relative entropy of the state against its background geodesic
/// (truncated-length differences, height defining function, extrapolated).
EntropyEstimate flow_entropy(const RadialCurveState& state,
                             const FlowEntropyControls& ctl = {});

struct FlowSample {
    double t, e_rel, e_rel_error, dissipation, max_h, band;
};

struct FlowTrajectory {
    std::vector<FlowSample> samples;
    std::vector<RadialCurveState> states;  // at the sampled times
    int grid_n = 0;
    double dt = 0.0;
    std::string scheme = "semi-implicit";
};

struct FlowControls {
    double dt_factor = 0.25;  // dt = dt_factor * dtheta^2
    int records = 100;
    FlowEntropyControls entropy{};
};

FlowTrajectory run_flow(const RadialCurveState& initial, double t_end,
                        const FlowControls& ctl = {});

struct IdentityResidual {
    double absolute = 0.0;
    double relative = 0.0;
    double entropy_drop = 0.0;
    double total_dissipation = 0.0;
};

/// Residual of the unweighted dissipation identity between recorded times
/// t < s: |E(t) - E(s) - integral of the dissipation|.
IdentityResidual monotonicity_check(const FlowTrajectory& traj, double t, double s);

// Ambient scalar field f(p, t); all derivatives are taken by central
// differences, so any smooth closure works.
struct AmbientField {
    std::function<double(const HalfSpacePoint&, double)> value;
};

/// Sampled sum of the scaled derivative norms
///   sum_{i<=2} |(y grad)^i f| + sum_{i<=1} |(y grad)^i d_t f|
/// over a height band at time t. A necessary-condition sample, not a
/// verification: the identity check below refuses fields where it is not
/// finite.
double sampled_field_norm(const AmbientField& f, double t, double y_min = 1e-3,
                          double y_max = 1.0, double x_range = 2.0);

/// Residual of the full three-term identity with weight f: the weighted
/// entropy drop against the weighted dissipation and the entropy of
/// d_t f - Laplace f + Hess f(n, n) along the flow.
IdentityResidual weighted_monotonicity_check(const FlowTrajectory& traj, const AmbientField& f,
                                             double t, double s,
                                             const FlowEntropyControls& ctl = {});

/// Curve immersion of a state (theta parameter, outward normal).
SampledImmersion immersion(const RadialCurveState& state);

// Near-boundary graph u(t, y) on a uniform grid y_j = j h, j = 1..M, with
// Dirichlet value a at y = 0 and a frozen outer value; evolves by
//   d_t u = y^2 u_yy / (1 + u_y^2) - y u_y.
struct NearBoundaryGraph {
    double a = 0.0;
    double h = 0.0;
    std::vector<double> u;  // u_1 .. u_M; u_M held fixed
    double time = 0.0;

    double y(int j) const { return h * (j + 1); }  // height of u[j]
};

NearBoundaryGraph make_graph(double a, double y_max, int nodes,
                             const std::function<double(double)>& u0_of_y);

NearBoundaryGraph graph_step(const NearBoundaryGraph& g, double dt);

/// max_j |u_j - a| / y_j^2
double barrier_constant(const NearBoundaryGraph& g);

struct ScalingTestResult {
    double sup_difference = 0.0;
    double barrier_initial = 0.0;
    double barrier_max = 0.0;  // largest barrier constant seen along either run
};

/// Evolves u and its lambda-rescaling on matched grids for the same time
/// and compares (1/lambda) u(t, lambda y) with the rescaled solution in sup
/// norm. The barrier constant is tracked along both runs.
ScalingTestResult graph_scaling_test(const NearBoundaryGraph& initial, double lambda,
                                     double t_end, double dt);

void write_trajectory_csv(std::ostream& os, const FlowTrajectory& traj);

}  // namespace hyprel
