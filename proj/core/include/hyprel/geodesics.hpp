#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hyprel/expansion.hpp"
#include "hyprel/halfspace.hpp"
#include "hyprel/quadrature.hpp"

namespace hyprel {

// Half-plane geodesic: the upper semicircle with ideal endpoints a < b,
// implicitly y^2 + (x - a)(x - b) = 0.
struct GeodesicH2 {
    double a, b;

    GeodesicH2(double a, double b);
    double center() const { return 0.5 * (a + b); }
    double radius() const { return 0.5 * (b - a); }
    HalfSpacePoint at_angle(double theta) const;  // theta in (0, pi)
};

/// Hyperbolic length of the geodesic above the cut {y >= eps}, in closed
/// form: 2 ln((b - a + sqrt((b - a)^2 - 4 eps^2)) / (2 eps)).
/// Requires 0 < eps < (b - a)/2; otherwise the cut is above the apex.
double truncated_length_exact(const GeodesicH2& g, double eps);

/// Cross ratio ((a2-a1)(a4-a3)) / ((a3-a1)(a4-a2)) of a1 < a2 < a3 < a4;
/// always in (0, 1). Invariant under fractional-linear maps.
double cross_ratio(double a1, double a2, double a3, double a4);

// Disjoint-or-crossing union of geodesics given by a perfect matching on
// 2k distinct ideal endpoints.
struct GeodesicConfig {
    std::vector<double> endpoints;               // sorted, distinct
    std::vector<std::pair<int, int>> pairing;    // index pairs into endpoints, lo < hi
    std::vector<GeodesicH2> geodesics;           // induced, one per pair

    static GeodesicConfig from_pairs(const std::vector<std::pair<double, double>>& pairs);

    /// Entropy-comparable means identical endpoint sets (no tolerance).
    bool comparable_with(const GeodesicConfig& other) const;
};

/// Exact relative entropy of two configurations over the same endpoints:
/// 2 sum log(gap) over c1 pairs minus the same over c2 pairs. Antisymmetric
/// and a cocycle; for four endpoints it equals 2 ln of a cross ratio.
double relative_entropy_exact(const GeodesicConfig& c1, const GeodesicConfig& c2);

// The three perfect matchings of four endpoints and the full antisymmetric
// table of their pairwise entropies.
struct PairingTable {
    std::array<GeodesicConfig, 3> configs;       // {12,34}, {13,24}, {14,23}
    std::array<std::array<double, 3>, 3> entropy;
};

PairingTable enumerate_pairings(const std::array<double, 4>& endpoints);

/// Image configuration under a Mobius map (throws if an endpoint hits the
/// pole). Endpoints are re-sorted; the matching is carried along.
GeodesicConfig mobius_image(const MobiusMap& m, const GeodesicConfig& c);

/// Quadrature-ready parametrization by angle theta in (0, pi) with the
/// outward unit normal; boundary descriptor records the endpoints.
SampledImmersion immersion(const GeodesicH2& g);

/// Union immersions for a whole configuration (one per geodesic).
std::vector<SampledImmersion> immersions(const GeodesicConfig& c);

/// The whole configuration as one immersion: component i occupies the
/// parameter band (i pi, (i+1) pi). Pick initial cell counts divisible by
/// the component count so cells align with the joints.
SampledImmersion config_immersion(const GeodesicConfig& c);

/// Quadrature + extrapolation route to the relative entropy of two
/// configurations over the same endpoints (the numeric counterpart of
/// relative_entropy_exact). Empty grid means the default one.
EntropyEstimate numeric_relative_entropy(const GeodesicConfig& c1, const GeodesicConfig& c2,
                                         const DefiningFunction& r,
                                         const std::vector<double>& eps_grid = {},
                                         const QuadratureControls& ctl = {});

/// The truncated-difference samples behind numeric_relative_entropy.
std::vector<EpsSample> truncated_difference_samples(const GeodesicConfig& c1,
                                                    const GeodesicConfig& c2,
                                                    const DefiningFunction& r,
                                                    const std::vector<double>& eps_grid = {},
                                                    const QuadratureControls& ctl = {});

}  // namespace hyprel
