#include "hyprel/geodesics.hpp"

#include <algorithm>
#include <cmath>

namespace hyprel {

GeodesicH2::GeodesicH2(double a, double b) : a(a), b(b) {
    if (!(a < b)) throw std::invalid_argument("GeodesicH2: endpoints must satisfy a < b");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("GeodesicH2: endpoints must be finite");
}

HalfSpacePoint GeodesicH2::at_angle(double theta) const {
    return HalfSpacePoint(center() + radius() * std::cos(theta), radius() * std::sin(theta));
}

double truncated_length_exact(const GeodesicH2& g, double eps) {
    const double d = g.b - g.a;
    if (!(eps > 0.0)) throw std::invalid_argument("truncated_length_exact: eps must be positive");
    if (!(eps < 0.5 * d))
        throw EmptyTruncationError("truncated_length_exact: cut is at or above the apex");
    return 2.0 * std::log((d + std::sqrt(d * d - 4.0 * eps * eps)) / (2.0 * eps));
}

double cross_ratio(double a1, double a2, double a3, double a4) {
    if (!(a1 < a2 && a2 < a3 && a3 < a4))
        throw std::invalid_argument("cross_ratio: need a1 < a2 < a3 < a4");
    return ((a2 - a1) * (a4 - a3)) / ((a3 - a1) * (a4 - a2));
}

GeodesicConfig GeodesicConfig::from_pairs(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("GeodesicConfig: empty pairing");
    GeodesicConfig c;
    for (const auto& [p, q] : pairs) {
        c.endpoints.push_back(p);
        c.endpoints.push_back(q);
    }
    std::sort(c.endpoints.begin(), c.endpoints.end());
    for (std::size_t i = 0; i + 1 < c.endpoints.size(); ++i)
        if (c.endpoints[i] == c.endpoints[i + 1])
            throw std::invalid_argument("GeodesicConfig: endpoints must be distinct");

    auto index_of = [&](double v) {
        return static_cast<int>(std::lower_bound(c.endpoints.begin(), c.endpoints.end(), v) -
                                c.endpoints.begin());
    };
    for (const auto& [p, q] : pairs) {
        const double lo = std::min(p, q), hi = std::max(p, q);
        c.pairing.emplace_back(index_of(lo), index_of(hi));
        c.geodesics.emplace_back(lo, hi);
    }
    return c;
}

bool GeodesicConfig::comparable_with(const GeodesicConfig& other) const {
    return endpoints == other.endpoints;
}

double relative_entropy_exact(const GeodesicConfig& c1, const GeodesicConfig& c2) {
    if (!c1.comparable_with(c2))
        throw IncomparableConfigsError("relative_entropy_exact: endpoint sets differ");
    // summed separately so identical configurations cancel exactly and the
    // value is exactly antisymmetric
    auto log_sum = [](const GeodesicConfig& c) {
        std::vector<double> logs;
        logs.reserve(c.geodesics.size());
        for (const auto& g : c.geodesics) logs.push_back(std::log(g.b - g.a));
        std::sort(logs.begin(), logs.end());
        double acc = 0.0;
        for (double v : logs) acc += v;
        return acc;
    };
    return 2.0 * (log_sum(c1) - log_sum(c2));
}

PairingTable enumerate_pairings(const std::array<double, 4>& e) {
    if (!(e[0] < e[1] && e[1] < e[2] && e[2] < e[3]))
        throw std::invalid_argument("enumerate_pairings: endpoints must be sorted and distinct");
    PairingTable t{
        {GeodesicConfig::from_pairs({{e[0], e[1]}, {e[2], e[3]}}),
         GeodesicConfig::from_pairs({{e[0], e[2]}, {e[1], e[3]}}),
         GeodesicConfig::from_pairs({{e[0], e[3]}, {e[1], e[2]}})},
        {}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t.entropy[i][j] = relative_entropy_exact(t.configs[i], t.configs[j]);
    return t;
}

GeodesicConfig mobius_image(const MobiusMap& m, const GeodesicConfig& c) {
    std::vector<std::pair<double, double>> mapped;
    mapped.reserve(c.pairing.size());
    for (const auto& [i, j] : c.pairing)
        mapped.emplace_back(m.apply_boundary(c.endpoints[i]), m.apply_boundary(c.endpoints[j]));
    return GeodesicConfig::from_pairs(mapped);
}

SampledImmersion immersion(const GeodesicH2& g) {
    SampledImmersion s;
    s.dimension = 1;
    s.u0 = 0.0;
    s.u1 = std::acos(-1.0);
    const double c = g.center(), R = g.radius();
    s.eval = [c, R](double theta, double) {
        const double ct = std::cos(theta), st = std::sin(theta);
        SurfaceSample smp;
        smp.p = HalfSpacePoint(c + R * ct, R * st);
        smp.normal = Vec{ct, 0.0, st};  // outward
        smp.jacobian = R;
        return smp;
    };
    s.boundary = {"h2-endpoints", {g.a, g.b}};
    return s;
}

std::vector<SampledImmersion> immersions(const GeodesicConfig& c) {
    std::vector<SampledImmersion> out;
    out.reserve(c.geodesics.size());
    for (const auto& g : c.geodesics) out.push_back(immersion(g));
    return out;
}

SampledImmersion config_immersion(const GeodesicConfig& c) {
    const double pi = std::acos(-1.0);
    const int k = static_cast<int>(c.geodesics.size());
    std::vector<double> centers, radii;
    for (const auto& g : c.geodesics) {
        centers.push_back(g.center());
        radii.push_back(g.radius());
    }
    SampledImmersion s;
    s.dimension = 1;
    s.u0 = 0.0;
    s.u1 = k * pi;
    s.eval = [centers, radii, k, pi](double u, double) {
        const int i = std::min(k - 1, std::max(0, static_cast<int>(u / pi)));
        // keep probes at the joints strictly inside the component
        const double theta = std::clamp(u - i * pi, 1e-13 * pi, (1.0 - 1e-13) * pi);
        const double ct = std::cos(theta), st = std::sin(theta);
        SurfaceSample smp;
        smp.p = HalfSpacePoint(centers[i] + radii[i] * ct, radii[i] * st);
        smp.normal = Vec{ct, 0.0, st};
        smp.jacobian = radii[i];
        return smp;
    };
    s.boundary = {"h2-endpoints", c.endpoints};
    return s;
}

std::vector<EpsSample> truncated_difference_samples(const GeodesicConfig& c1,
                                                    const GeodesicConfig& c2,
                                                    const DefiningFunction& r,
                                                    const std::vector<double>& eps_grid,
                                                    const QuadratureControls& ctl) {
    if (!c1.comparable_with(c2))
        throw IncomparableConfigsError("truncated_difference_samples: endpoint sets differ");
    const std::vector<double> grid = eps_grid.empty() ? default_eps_grid() : eps_grid;
    // cells aligned with the component joints
    QuadratureControls qc = ctl;
    const int k = static_cast<int>(std::max(c1.geodesics.size(), c2.geodesics.size()));
    qc.initial_cells = ((ctl.initial_cells + k - 1) / k) * k;
    const SampledImmersion s1 = config_immersion(c1);
    const SampledImmersion s2 = config_immersion(c2);

    std::vector<EpsSample> out;
    out.reserve(grid.size());
    for (double eps : grid) {
        const QuadratureResult a = vol_eps(s1, r, eps, qc);
        const QuadratureResult b = vol_eps(s2, r, eps, qc);
        out.push_back({eps, a.value - b.value, a.error_bound + b.error_bound});
    }
    return out;
}

EntropyEstimate numeric_relative_entropy(const GeodesicConfig& c1, const GeodesicConfig& c2,
                                         const DefiningFunction& r,
                                         const std::vector<double>& eps_grid,
                                         const QuadratureControls& ctl) {
    const auto samples = truncated_difference_samples(c1, c2, r, eps_grid, ctl);
    std::vector<std::pair<double, double>> diffs;
    diffs.reserve(samples.size());
    double qerr = 0.0;
    for (const auto& s : samples) {
        diffs.emplace_back(s.eps, s.value);
        qerr = std::max(qerr, s.error_bound);
    }
    EntropyEstimate est = entropy_limit(diffs);
    est.error_bar += qerr;
    return est;
}

}  // namespace hyprel
