#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hyprel/errors.hpp"

namespace hyprel {

// Least-squares fit of truncated-volume samples in the fixed basis
//   { eps^{-(n-1)}, eps^{-(n-3)}, ... }  u  ({ log(1/eps) } iff n odd)  u  { 1 },
// descending even-step powers (down to eps^{-1} for even n, eps^{-2} for
// odd n). The constant term is the renormalized area relative to r.
struct ExpansionFit {
    int n = 1;
    std::vector<int> power_exponents;     // k for basis terms eps^{-k}, descending
    std::vector<double> power_coefficients;
    std::optional<double> log_coefficient;  // present iff n odd
    double constant_term = 0.0;
    double residual_norm = 0.0;      // RMS on held-out samples (every 4th)
    double condition_estimate = 0.0;

    double evaluate(double eps) const;
};

ExpansionFit fit_expansion(std::span<const std::pair<double, double>> samples, int n);

struct EntropyEstimate {
    enum class Method { PlainLimit, Richardson };

    double value = 0.0;
    double error_bar = 0.0;
    std::vector<double> eps_sequence;  // strictly decreasing
    Method method = Method::Richardson;
};

/// Extrapolated limit of matched truncated differences against the tail
/// model E + a eps + b eps^2. Throws DivergentDifferenceError when the
/// differences fail a Cauchy tail test (non-cancelling divergent parts).
EntropyEstimate entropy_limit(std::span<const std::pair<double, double>> diff_samples,
                              EntropyEstimate::Method method = EntropyEstimate::Method::Richardson);

/// Geometric truncation grid, ratio 0.8 from 0.3 down to 1e-3.
std::vector<double> default_eps_grid(double eps_max = 0.3, double eps_min = 1e-3,
                                     double ratio = 0.8);

// CSV exchange of (eps, value, error_bound) tables. Header row mandatory,
// 17 significant digits, Unix newlines.
struct EpsSample {
    double eps;
    double value;
    double error_bound;
};

void write_samples_csv(std::ostream& os, std::span<const EpsSample> samples);
std::vector<EpsSample> read_samples_csv(std::istream& is);

}  // namespace hyprel
