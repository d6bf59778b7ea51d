#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "hyprel/quadrature.hpp"

namespace hyprel {

// Boundary Taylor data of a minimal profile rho(y) at y = 0:
//   rho = a0 + a2 y^2 + a3 y^3 + a4 y^4 + O(y^5)
// a1 = 0 enforces orthogonal intersection with the ideal boundary, a2 and
// a4 are determined by the asymptotic radius, a3 is the free shooting
// parameter: a2 = -1/(2 r0), a4 = -1/(8 r0^3).
struct BoundaryTaylor {
    double r0 = 1.0;
    std::array<double, 5> a{};
    int order = 4;

    double rho(double y) const;
    double drho(double y) const;
};

BoundaryTaylor boundary_taylor(double r0, double a3, int order = 4);

/// Arclength rate of the profile direction angle for a minimal surface of
/// revolution: alpha' = -sin(alpha)/rho - 2 cos(alpha)/y.
double profile_alpha_rate(double rho, double y, double alpha);

struct ProfileSample {
    double s, rho, y, alpha;
};

// Rotationally symmetric surface in the half-space model, stored as an
// arclength-sampled profile curve with C^1 interpolation between samples.
struct RevolutionSurface {
    enum class Topology { Disk, Annulus };

    Topology topology = Topology::Disk;
    std::vector<double> asymptotic_radii;  // sorted; one entry for disks
    std::vector<ProfileSample> profile;    // s ascending
    double inner_a3 = 0.0;                 // Taylor parameter at the inner end

    double s_min() const { return profile.front().s; }
    double s_max() const { return profile.back().s; }
    double max_height() const;
    double s_at_max_height() const;

    ProfileSample at(double s) const;
};

struct ShootingControls {
    double y_start_factor = 1e-3;  // series start height, relative to r1
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    // stored root profiles are re-integrated tighter so that the plug-in
    // ODE residual of the interpolant stays below 1e-8
    double profile_rel_tol = 1e-12;
    double profile_abs_tol = 1e-13;
    int scan_points = 512;
    double bisect_tol = 1e-10;  // in the shooting parameter
    double sample_ds = 1e-3;    // stored profile spacing, relative to r1
    double initial_halfwidth = 1.0;
    double max_halfwidth = 256.0;
    int threads = 1;
};

struct LandingTracePoint {
    enum class Status { Landed, HitAxis, Escaped };
    double a3 = 0.0;
    double landing_radius = 0.0;  // meaningful only when Landed
    Status status = Status::Landed;
};

struct ShootingResult {
    std::vector<RevolutionSurface> surfaces;  // one per root, ascending a3
    std::vector<double> roots;                // a3 values
    std::vector<LandingTracePoint> trace;     // ascending a3
    double scan_halfwidth = 0.0;
};

/// Scans the shooting parameter, records the landing map, and refines every
/// bracket of the target radius by bisection. Zero, one, or two surfaces is
/// a normal outcome.
ShootingResult shoot_catenoid(double r1, double r2, const ShootingControls& ctl = {});

/// Integrate a single profile and report where it lands (test/diagnostic
/// access to one point of the landing map).
LandingTracePoint shoot_once(double r1, double a3, const ShootingControls& ctl = {});

/// Closed-form truncated area of the radius-R hemisphere: 2 pi (R/eps - 1).
double hemisphere_vol_eps(double R, double eps);

/// The hemisphere as a sampled revolution surface (exact profile).
RevolutionSurface hemisphere_surface(double R, double sample_ds = 1e-3);

/// Renormalized area from curvature data: -2 pi chi - (1/2) integral of
/// |trace-free second fundamental form|^2 over the surface.
double alexakis_mazzeo_area(const RevolutionSurface& s,
                            const QuadratureControls& ctl = {.tol = 1e-10});

/// Hyperbolic mean curvature at arclength s, from the interpolated profile
/// alone (plug-in check; vanishes on minimal surfaces).
double mean_curvature_h(const RevolutionSurface& surf, double s);

struct SeparationRate {
    bool exact_coincidence = false;
    double slope = 0.0;
    std::vector<std::pair<double, double>> samples;  // (height, separation)
};

/// Log-log slope of the profile separation of two surfaces with equal
/// asymptotic circles, sampled on heights in [1e-3, 1e-1] * r_inner.
SeparationRate separation_rate(const RevolutionSurface& s1, const RevolutionSurface& s2);

/// Quadrature-ready immersion (arclength x revolution angle).
SampledImmersion immersion(const RevolutionSurface& s);

void write_landing_trace_csv(std::ostream& os, const std::vector<LandingTracePoint>& trace);
void write_profile_csv(std::ostream& os, const RevolutionSurface& s);

}  // namespace hyprel
