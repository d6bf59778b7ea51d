#include "commands.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "hyprel/expansion.hpp"
#include "hyprel/flow.hpp"
#include "hyprel/geodesics.hpp"
#include "hyprel/minimal.hpp"
#include "hyprel/weights.hpp"

namespace hyprel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kTwoPi = 6.283185307179586476925287;

int env_threads() {
    const char* v = std::getenv("HYPREL_THREADS");
    if (!v) return 1;
    const int n = std::atoi(v);
    return n >= 1 ? n : 1;
}

// Strict parameter access: every key must be known, every unknown key is a
// config error carrying its path.
class ParamReader {
public:
    ParamReader(const json& j, std::string path) : obj_(j), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    double number(const std::string& key, double def) {
        return fetch<double>(key, def, [](const json& v) { return v.is_number(); }, "number");
    }
    int integer(const std::string& key, int def) {
        return fetch<int>(key, def, [](const json& v) { return v.is_number_integer(); },
                          "integer");
    }
    bool boolean(const std::string& key, bool def) {
        return fetch<bool>(key, def, [](const json& v) { return v.is_boolean(); }, "boolean");
    }
    std::vector<double> numbers(const std::string& key, std::vector<double> def) {
        seen_.insert(key);
        if (!obj_.contains(key)) {
            resolved_[key] = def;
            return def;
        }
        const json& v = obj_.at(key);
        if (!v.is_array()) throw ConfigError(path_ + "." + key + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number())
                throw ConfigError(path_ + "." + key + ": expected an array of numbers");
            out.push_back(e.get<double>());
        }
        resolved_[key] = out;
        return out;
    }

    void finish() {
        for (const auto& [key, value] : obj_.items()) {
            (void)value;
            if (!seen_.count(key)) throw ConfigError(path_ + "." + key + ": unknown field");
        }
    }

    const json& resolved() const { return resolved_; }

private:
    template <typename T, typename Pred>
    T fetch(const std::string& key, T def, Pred pred, const char* kind) {
        seen_.insert(key);
        if (!obj_.contains(key)) {
            resolved_[key] = def;
            return def;
        }
        const json& v = obj_.at(key);
        if (!pred(v)) throw ConfigError(path_ + "." + key + ": expected a " + kind);
        T out = v.get<T>();
        resolved_[key] = out;
        return out;
    }

    json obj_;
    std::string path_;
    std::set<std::string> seen_;
    json resolved_ = json::object();
};

struct Artifacts {
    fs::path dir;
    std::vector<std::string> names;

    std::ofstream open(const std::string& name) {
        fs::create_directories(dir);
        names.push_back(name);
        std::ofstream os(dir / name, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
        return os;
    }
};

void add_check(CommandOutcome& out, const std::string& name, double value, double threshold,
               bool pass) {
    out.checks.push_back({name, pass, value, threshold});
}

// value within +/- threshold
void check_abs(CommandOutcome& out, const std::string& name, double value, double threshold) {
    add_check(out, name, value, threshold, std::abs(value) <= threshold);
}

void check_le(CommandOutcome& out, const std::string& name, double value, double threshold) {
    add_check(out, name, value, threshold, value <= threshold);
}

void check_ge(CommandOutcome& out, const std::string& name, double value, double threshold) {
    add_check(out, name, value, threshold, value >= threshold);
}

std::vector<double> eps_grid_from(ParamReader& p) {
    const double eps_max = p.number("eps_max", 0.3);
    const double eps_min = p.number("eps_min", 1e-3);
    const double ratio = p.number("eps_ratio", 0.8);
    return default_eps_grid(eps_max, eps_min, ratio);
}

GeodesicConfig pairing_from(const std::vector<double>& e, int which) {
    if (e.size() != 4) throw ConfigError("parameters.endpoints: expected 4 values");
    std::array<double, 4> a{e[0], e[1], e[2], e[3]};
    const auto t = enumerate_pairings(a);
    if (which < 0 || which > 2) throw ConfigError("parameters: pairing index must be 0, 1, or 2");
    return t.configs[which];
}

std::vector<EpsSample> surface_vol_samples(const SampledImmersion& im, const DefiningFunction& r,
                                           const std::vector<double>& grid, double tol) {
    std::vector<EpsSample> out;
    for (double eps : grid) {
        const auto q = vol_eps(im, r, eps, {.tol = tol});
        out.push_back({eps, q.value, q.error_bound});
    }
    return out;
}

std::vector<std::pair<double, double>> as_pairs(const std::vector<EpsSample>& samples) {
    std::vector<std::pair<double, double>> out;
    for (const auto& s : samples) out.emplace_back(s.eps, s.value);
    return out;
}

// ---------------------------------------------------------------- commands

CommandOutcome cmd_geodesic_entropy(ParamReader& p, Artifacts& art) {
    const auto endpoints = p.numbers("endpoints", {0.0, 1.0, 2.0, 4.0});
    const auto grid = eps_grid_from(p);
    const double quad_tol = p.number("quad_tol", 1e-9);
    const double tol = p.number("tol", 1e-6);
    p.finish();

    CommandOutcome out;
    const auto c1 = pairing_from(endpoints, 0);
    const auto c2 = pairing_from(endpoints, 1);
    const double exact = relative_entropy_exact(c1, c2);

    const auto samples =
        truncated_difference_samples(c1, c2, DefiningFunction::height(), grid, {.tol = quad_tol});
    {
        auto os = art.open("diff_samples.csv");
        write_samples_csv(os, samples);
    }
    const EntropyEstimate est =
        numeric_relative_entropy(c1, c2, DefiningFunction::height(), grid, {.tol = quad_tol});

    {
        auto os = art.open("exact_table.csv");
        os << "i,j,entropy\n";
        std::array<double, 4> a{endpoints[0], endpoints[1], endpoints[2], endpoints[3]};
        const auto t = enumerate_pairings(a);
        char buf[64];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", i, j, t.entropy[i][j]);
                os << buf;
            }
    }

    check_abs(out, "numeric-vs-exact", est.value - exact, tol);
    check_le(out, "error-bar", est.error_bar, 1e-3);
    return out;
}

CommandOutcome cmd_invariance(ParamReader& p, Artifacts& art) {
    const auto endpoints = p.numbers("endpoints", {0.0, 1.0, 2.0, 4.0});
    const auto grid = eps_grid_from(p);
    const double quad_tol = p.number("quad_tol", 1e-9);
    const double tol = p.number("tol", 1e-4);
    const double alpha = p.number("alpha", 1.0);
    const double beta = p.number("beta", 0.3);
    const bool with_catenoid = p.boolean("include_catenoid", false);
    const double r1 = p.number("catenoid_r1", 1.0);
    const double r2 = p.number("catenoid_r2", 2.0);
    p.finish();

    CommandOutcome out;
    const auto c1 = pairing_from(endpoints, 0);
    const auto c2 = pairing_from(endpoints, 1);
    const double exact = relative_entropy_exact(c1, c2);

    const std::array<DefiningFunction, 3> rs{DefiningFunction::height(),
                                             DefiningFunction::scaled(0.0, 0.0, alpha),
                                             DefiningFunction::tilted(beta)};

    auto os = art.open("entropies.csv");
    os << "surface,defining_function,value,error_bar\n";
    char buf[160];

    std::array<double, 3> vals{};
    for (int i = 0; i < 3; ++i) {
        const auto est = numeric_relative_entropy(c1, c2, rs[i], grid, {.tol = quad_tol});
        vals[i] = est.value;
        std::snprintf(buf, sizeof buf, "geodesic,%s,%.17g,%.17g\n", rs[i].describe().c_str(),
                      est.value, est.error_bar);
        os << buf;
        check_abs(out, "geodesic-vs-exact/" + rs[i].describe(), est.value - exact, tol);
    }
    double dev = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) dev = std::max(dev, std::abs(vals[i] - vals[j]));
    check_le(out, "geodesic-pairwise-deviation", dev, tol);

    if (with_catenoid) {
        ShootingControls sc;
        sc.threads = env_threads();
        const auto shot = shoot_catenoid(r1, r2, sc);
        if (shot.surfaces.size() < 2) {
            add_check(out, "catenoid-pair-exists", static_cast<double>(shot.surfaces.size()), 2.0,
                      false);
            return out;
        }
        const auto im1 = immersion(shot.surfaces[0]);
        const auto im2 = immersion(shot.surfaces[1]);
        std::array<double, 3> cv{};
        for (int i = 0; i < 3; ++i) {
            std::vector<std::pair<double, double>> diffs;
            for (double eps : grid)
                diffs.emplace_back(eps, vol_eps(im1, rs[i], eps, {.tol = quad_tol}).value -
                                            vol_eps(im2, rs[i], eps, {.tol = quad_tol}).value);
            const auto est = entropy_limit(diffs);
            cv[i] = est.value;
            std::snprintf(buf, sizeof buf, "catenoid-pair,%s,%.17g,%.17g\n",
                          rs[i].describe().c_str(), est.value, est.error_bar);
            os << buf;
        }
        double cdev = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) cdev = std::max(cdev, std::abs(cv[i] - cv[j]));
        check_le(out, "catenoid-pairwise-deviation", cdev, tol);
    }
    return out;
}

CommandOutcome cmd_hemisphere(ParamReader& p, Artifacts& art) {
    const double radius = p.number("radius", 1.0);
    const auto grid = eps_grid_from(p);
    const double quad_tol = p.number("quad_tol", 1e-9);
    const double c0_rel_tol = p.number("c0_rel_tol", 1e-6);
    const double area_abs_tol = p.number("area_abs_tol", 1e-3);
    p.finish();

    CommandOutcome out;
    const auto im = immersion(hemisphere_surface(radius));
    const auto samples = surface_vol_samples(im, DefiningFunction::height(), grid, quad_tol);
    {
        auto os = art.open("samples.csv");
        write_samples_csv(os, samples);
    }
    const auto fit = fit_expansion(as_pairs(samples), 2);

    check_abs(out, "c0-relative", fit.power_coefficients[0] / (kTwoPi * radius) - 1.0, c0_rel_tol);
    check_abs(out, "renormalized-area", fit.constant_term + kTwoPi, area_abs_tol);
    check_le(out, "fit-residual", fit.residual_norm, 1e-6);
    return out;
}

CommandOutcome cmd_catenoid(ParamReader& p, Artifacts& art) {
    const double r1 = p.number("r1", 1.0);
    const double r2 = p.number("r2", 2.0);
    const auto grid = eps_grid_from(p);
    const double quad_tol = p.number("quad_tol", 1e-9);
    const double am_rel_tol = p.number("am_rel_tol", 1e-2);
    p.finish();

    CommandOutcome out;
    ShootingControls sc;
    sc.threads = env_threads();
    const auto shot = shoot_catenoid(r1, r2, sc);
    {
        auto os = art.open("landing_trace.csv");
        write_landing_trace_csv(os, shot.trace);
    }

    double window_max = 0.0;
    for (const auto& t : shot.trace)
        if (t.status == LandingTracePoint::Status::Landed)
            window_max = std::max(window_max, t.landing_radius / r1);
    add_check(out, "empirical-max-ratio", window_max, 1.0, window_max > 1.0);

    std::vector<double> c2s, residuals;
    const DefiningFunction height = DefiningFunction::height();
    for (std::size_t i = 0; i < shot.surfaces.size(); ++i) {
        const auto& surf = shot.surfaces[i];
        {
            auto os = art.open("profile_" + std::to_string(i) + ".csv");
            write_profile_csv(os, surf);
        }
        const auto samples = surface_vol_samples(immersion(surf), height, grid, quad_tol);
        {
            auto os = art.open("samples_" + std::to_string(i) + ".csv");
            write_samples_csv(os, samples);
        }
        const auto fit = fit_expansion(as_pairs(samples), 2);
        const double am = alexakis_mazzeo_area(surf);
        c2s.push_back(fit.constant_term);
        residuals.push_back(fit.residual_norm);
        check_abs(out, "am-identity-rel/" + std::to_string(i),
                  (fit.constant_term - am) / std::abs(am), am_rel_tol);
    }

    if (shot.surfaces.size() >= 2) {
        const auto im1 = immersion(shot.surfaces[0]);
        const auto im2 = immersion(shot.surfaces[1]);
        std::vector<EpsSample> diff;
        for (double eps : grid) {
            const auto a = vol_eps(im1, height, eps, {.tol = quad_tol});
            const auto b = vol_eps(im2, height, eps, {.tol = quad_tol});
            diff.push_back({eps, a.value - b.value, a.error_bound + b.error_bound});
        }
        {
            auto os = art.open("pair_diff.csv");
            write_samples_csv(os, diff);
        }
        const auto est = entropy_limit(as_pairs(diff));
        const double via_fits = c2s[0] - c2s[1];
        const double combined =
            est.error_bar + 3.0 * (residuals[0] + residuals[1]) + 1e-8;
        add_check(out, "entropy-equals-area-difference", est.value - via_fits, combined,
                  std::abs(est.value - via_fits) <= combined);
    } else {
        add_check(out, "pair-exists", static_cast<double>(shot.surfaces.size()), 2.0, false);
    }
    return out;
}

CommandOutcome cmd_separation(ParamReader& p, Artifacts& art) {
    const double r1 = p.number("r1", 1.0);
    const double r2 = p.number("r2", 2.0);
    const double slope_lo = p.number("slope_min", 2.7);
    const double slope_hi = p.number("slope_max", 3.3);
    p.finish();

    CommandOutcome out;
    ShootingControls sc;
    sc.threads = env_threads();
    const auto shot = shoot_catenoid(r1, r2, sc);
    if (shot.surfaces.size() < 2) {
        add_check(out, "pair-exists", static_cast<double>(shot.surfaces.size()), 2.0, false);
        return out;
    }
    const auto rate = separation_rate(shot.surfaces[0], shot.surfaces[1]);
    {
        auto os = art.open("separation.csv");
        os << "y,separation\n";
        char buf[96];
        for (const auto& [y, d] : rate.samples) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", y, d);
            os << buf;
        }
    }
    add_check(out, "exact-coincidence", rate.exact_coincidence ? 1.0 : 0.0, 0.0,
              !rate.exact_coincidence);
    check_ge(out, "separation-slope-min", rate.slope, slope_lo);
    check_le(out, "separation-slope-max", rate.slope, slope_hi);
    return out;
}

CommandOutcome cmd_mcf(ParamReader& p, Artifacts& art) {
    const double R0 = p.number("radius0", 1.0);
    const double center = p.number("center", 0.0);
    const int n = p.integer("grid", 400);
    const double amplitude = p.number("amplitude", 0.1);
    const double t_end = p.number("t_end", 2.0);
    const double dt_factor = p.number("dt_factor", 0.25);
    const int records = p.integer("records", 100);
    const double eps_min = p.number("eps_min", 1e-3);
    const double quad_tol = p.number("quad_tol", 1e-10);
    const double mono_tol = p.number("monotonicity_tol", 1e-8);
    const double residual_rel_tol = p.number("residual_rel_tol", 0.01);
    const int stationary_steps = p.integer("stationary_steps", 1000);
    const double stationary_tol = p.number("stationary_tol", 1e-12);
    p.finish();

    CommandOutcome out;
    FlowControls fc;
    fc.dt_factor = dt_factor;
    fc.records = records;
    fc.entropy.eps_grid = default_eps_grid(0.3, eps_min);
    fc.entropy.quad_tol = quad_tol;

    const auto initial = make_radial_state(center, R0, n, [&](double th) {
        return R0 * (1.0 + amplitude * std::sin(th) * std::sin(th));
    });
    const FlowTrajectory traj = run_flow(initial, t_end, fc);
    {
        auto os = art.open("trajectory.csv");
        write_trajectory_csv(os, traj);
    }

    double worst_increase = -1e300;
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i)
        worst_increase =
            std::max(worst_increase, traj.samples[i + 1].e_rel - traj.samples[i].e_rel);
    check_le(out, "entropy-monotone", worst_increase, mono_tol);

    const auto res = monotonicity_check(traj, traj.samples.front().t, traj.samples.back().t);
    check_le(out, "dissipation-identity-rel", res.relative, residual_rel_tol);

    // lower bound along the run: E(t) >= E(0) - total dissipation - bars
    double lower_slack = 1e300;
    double running = 0.0;
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        running += 0.5 * (traj.samples[i + 1].dissipation + traj.samples[i].dissipation) *
                   (traj.samples[i + 1].t - traj.samples[i].t);
        const double bound = traj.samples.front().e_rel - running -
                             traj.samples[i + 1].e_rel_error - traj.samples.front().e_rel_error;
        lower_slack = std::min(lower_slack, traj.samples[i + 1].e_rel - bound);
    }
    check_ge(out, "entropy-lower-bound-slack", lower_slack, -1e-8);

    // fixed point preservation
    auto st = make_radial_state(center, R0, n, [&](double) { return R0; });
    const double dt = dt_factor * st.dtheta() * st.dtheta();
    for (int k = 0; k < stationary_steps; ++k) st = step(st, dt);
    check_le(out, "stationary-drift", st.band(), stationary_tol);
    return out;
}

CommandOutcome cmd_scaling_test(ParamReader& p, Artifacts& art) {
    const double a = p.number("boundary_value", 0.05);
    const double c = p.number("quadratic_coefficient", 0.4);
    const double y_max = p.number("y_max", 1.0);
    const int nodes = p.integer("nodes", 256);
    const double lambda = p.number("lambda", 0.5);
    const double t_end = p.number("t_end", 0.05);
    const double dt_factor = p.number("dt_factor", 0.25);
    const double sup_tol = p.number("sup_tol", 1e-6);
    p.finish();

    CommandOutcome out;
    const auto g0 = make_graph(a, y_max, nodes, [&](double y) { return a + c * y * y; });
    const double dt = dt_factor * g0.h;
    const auto res = graph_scaling_test(g0, lambda, t_end, dt);
    {
        auto os = art.open("scaling.csv");
        os << "lambda,t_end,sup_difference,barrier_initial,barrier_max\n";
        char buf[200];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", lambda, t_end,
                      res.sup_difference, res.barrier_initial, res.barrier_max);
        os << buf;
    }
    check_le(out, "scaling-sup-difference", res.sup_difference, sup_tol);
    check_le(out, "barrier-preserved", res.barrier_max,
             res.barrier_initial * (1.0 + 1e-9) + 1e-12);
    return out;
}

CommandOutcome cmd_weighted(ParamReader& p, Artifacts& art) {
    const auto endpoints = p.numbers("endpoints", {0.0, 1.0, 2.0, 4.0});
    const auto grid = eps_grid_from(p);
    const double quad_tol = p.number("quad_tol", 1e-9);
    const double lin_tol = p.number("linearity_tol", 1e-8);
    const double grad_tol = p.number("gradient_tol", 1e-10);
    const double cutoff_eps = p.number("cutoff_eps", 0.2);
    p.finish();

    CommandOutcome out;
    const auto c1 = pairing_from(endpoints, 0);
    const auto c2 = pairing_from(endpoints, 1);
    const auto s1 = config_immersion(c1);
    const auto s2 = config_immersion(c2);
    const DefiningFunction height = DefiningFunction::height();
    WeightedEntropyControls wc;
    wc.eps_grid = grid;
    wc.quadrature.tol = quad_tol;
    wc.quadrature.initial_cells = 64;

    SymMat Qy = SymMat::zero();
    Qy.m[2][2] = 1.0;
    const Weight w1 = Weight::quadratic(Qy, 1);
    SymMat Qx = SymMat::zero();
    Qx.m[0][0] = 1.0;
    const Weight w2 = Weight::quadratic(Qx, 1);

    // psi = 1 reduces exactly to the unweighted entropy
    const auto one = weighted_entropy(s1, s2, Weight::constant(1.0, 1), height, wc);
    check_abs(out, "unit-weight-reduces", one.estimate.value - one.unweighted_value, 0.0);

    const auto e1 = weighted_entropy(s1, s2, w1, height, wc);
    const auto e2 = weighted_entropy(s1, s2, w2, height, wc);
    const auto mix = weighted_entropy(s1, s2, 0.7 * w1 + 0.3 * w2, height, wc);
    check_abs(out, "linearity",
              mix.estimate.value - (0.7 * e1.estimate.value + 0.3 * e2.estimate.value), lin_tol);

    {
        auto os = art.open("weighted_diff.csv");
        write_samples_csv(os, e1.diff_samples);
    }
    {
        auto os = art.open("weighted_summary.csv");
        os << "weight,value,error_bar,x_norm,bound_ratio\n";
        char buf[200];
        std::snprintf(buf, sizeof buf, "ey_sq,%.17g,%.17g,%.17g,%.17g\n", e1.estimate.value,
                      e1.estimate.error_bar, e1.x_norm, e1.bound_ratio);
        os << buf;
        std::snprintf(buf, sizeof buf, "ex_sq,%.17g,%.17g,%.17g,%.17g\n", e2.estimate.value,
                      e2.estimate.error_bar, e2.x_norm, e2.bound_ratio);
        os << buf;
    }

    // truncation-tail slope of the weighted differences
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (const auto& s : e1.diff_samples) {
            const double tail = std::abs(s.value - e1.estimate.value);
            if (tail < 1e-14) continue;
            const double lx = std::log(s.eps), ly = std::log(tail);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++m;
        }
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        check_ge(out, "weighted-tail-slope", slope, 1.0);
    }

    // vanishing sphere gradient of the reduced weight at the extension normal
    {
        const GeodesicH2 g = c1.geodesics.front();
        const NormalField field(g.center(), g.radius());
        const auto red = quadratic_reduction(w1, field, cutoff_eps);
        double worst = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double theta = 0.002 * k;  // heights below cutoff_eps/2
            for (double off : {0.97, 1.0, 1.03}) {
                const double rr = g.radius() * off;
                HalfSpacePoint q(g.center() + rr * std::cos(theta), rr * std::sin(theta));
                if (q.y >= 0.5 * cutoff_eps) continue;
                const Vec u = field.unit_direction(q);
                worst = std::max(worst, red.psi_bar.sphere_gradient(q, u).norm());
            }
        }
        check_le(out, "reduction-gradient", worst, grad_tol);
    }
    return out;
}

}  // namespace

bool CommandOutcome::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");

    RunConfig cfg;
    const std::set<std::string> allowed{"command", "parameters", "output_dir", "seed"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) throw ConfigError("config." + key + ": unknown field");
    }
    if (!j.contains("command") || !j.at("command").is_string())
        throw ConfigError("config.command: required string");
    cfg.command = j.at("command").get<std::string>();
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), cfg.command) == names.end())
        throw ConfigError("config.command: unknown command '" + cfg.command + "'");
    if (j.contains("parameters")) {
        if (!j.at("parameters").is_object())
            throw ConfigError("config.parameters: expected an object");
        cfg.parameters_json = j.at("parameters").dump();
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string())
            throw ConfigError("config.output_dir: expected a string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer())
            throw ConfigError("config.seed: expected an integer");
        cfg.seed = j.at("seed").get<long long>();
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"geodesic-entropy", "invariance", "hemisphere",
                                                "catenoid",         "separation", "mcf",
                                                "scaling-test",     "weighted"};
    return names;
}

CommandOutcome execute(const RunConfig& cfg, const std::string& out_dir, bool verbose) {
    const auto t0 = std::chrono::steady_clock::now();

    Artifacts art;
    art.dir = out_dir.empty() ? fs::path("hyprel-out") / cfg.command : fs::path(out_dir);

    json params = json::parse(cfg.parameters_json);
    ParamReader reader(params, "parameters");

    CommandOutcome out;
    if (cfg.command == "geodesic-entropy")
        out = cmd_geodesic_entropy(reader, art);
    else if (cfg.command == "invariance")
        out = cmd_invariance(reader, art);
    else if (cfg.command == "hemisphere")
        out = cmd_hemisphere(reader, art);
    else if (cfg.command == "catenoid")
        out = cmd_catenoid(reader, art);
    else if (cfg.command == "separation")
        out = cmd_separation(reader, art);
    else if (cfg.command == "mcf")
        out = cmd_mcf(reader, art);
    else if (cfg.command == "scaling-test")
        out = cmd_scaling_test(reader, art);
    else if (cfg.command == "weighted")
        out = cmd_weighted(reader, art);
    else
        throw ConfigError("config.command: unknown command '" + cfg.command + "'");

    out.command = cfg.command;
    out.artifacts = art.names;
    out.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // manifest: the full resolved configuration, enough to recompute
    // every number in the result files
    {
        json manifest;
        manifest["command"] = cfg.command;
        manifest["parameters"] = reader.resolved();
        manifest["output_dir"] = art.dir.string();
        manifest["seed"] = cfg.seed;
        manifest["library_version"] = kVersion;
        manifest["threads"] = env_threads();
        manifest["wall_time_seconds"] = out.wall_time_seconds;
        manifest["artifacts"] = out.artifacts;
        auto os = art.open("manifest.json");
        os << manifest.dump(2) << "\n";
    }
    {
        json summary;
        summary["command"] = cfg.command;
        summary["pass"] = out.pass();
        json checks = json::array();
        for (const auto& c : out.checks)
            checks.push_back(
                {{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"threshold", c.threshold}});
        summary["checks"] = checks;
        auto os = art.open("summary.json");
        os << summary.dump(2) << "\n";
    }

    if (verbose) {
        for (const auto& c : out.checks)
            std::cerr << (c.pass ? "[pass] " : "[FAIL] ") << cfg.command << ": " << c.name
                      << " value=" << c.value << " threshold=" << c.threshold << "\n";
    }
    return out;
}

int exit_code_for(const CommandOutcome& outcome) { return outcome.pass() ? 0 : 2; }

}  // namespace hyprel::cli
