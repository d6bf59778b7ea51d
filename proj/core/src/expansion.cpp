#include "hyprel/expansion.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace hyprel {

namespace {

using Samples = std::vector<std::pair<double, double>>;

Samples sorted_descending(std::span<const std::pair<double, double>> samples) {
    Samples s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i].first > 0.0)) throw std::invalid_argument("samples: eps must be positive");
        if (i > 0 && s[i].first == s[i - 1].first)
            throw std::invalid_argument("samples: duplicate eps");
    }
    return s;
}

// Column-scaled least squares via SVD; returns coefficients and the
// condition number of the scaled design matrix.
struct LsResult {
    Eigen::VectorXd coef;
    double condition;
};

LsResult solve_scaled_ls(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs,
                         double rank_tol = 1e-12) {
    Eigen::VectorXd scale(A.cols());
    Eigen::MatrixXd As = A;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        scale(j) = A.col(j).cwiseAbs().maxCoeff();
        if (scale(j) == 0.0) scale(j) = 1.0;
        As.col(j) /= scale(j);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    const double condition = smax / std::max(smin, 1e-300);
    if (!(smin > rank_tol * smax))
        throw IllConditionedFitError("fit: design matrix is numerically rank deficient "
                                     "(condition " + std::to_string(condition) + ")",
                                     condition);
    Eigen::VectorXd c = svd.solve(rhs);
    for (Eigen::Index j = 0; j < A.cols(); ++j) c(j) /= scale(j);
    return {c, condition};
}

}  // namespace

double ExpansionFit::evaluate(double eps) const {
    double acc = constant_term;
    for (std::size_t i = 0; i < power_exponents.size(); ++i)
        acc += power_coefficients[i] * std::pow(eps, -power_exponents[i]);
    if (log_coefficient) acc += *log_coefficient * std::log(1.0 / eps);
    return acc;
}

ExpansionFit fit_expansion(std::span<const std::pair<double, double>> samples, int n) {
    if (n < 1) throw std::invalid_argument("fit_expansion: dimension must be >= 1");
    const Samples s = sorted_descending(samples);

    std::vector<int> powers;
    for (int k = n - 1; k >= (n % 2 == 0 ? 1 : 2); k -= 2) powers.push_back(k);
    const bool with_log = (n % 2 == 1);
    const std::size_t n_basis = powers.size() + (with_log ? 1 : 0) + 1;

    if (s.size() < n_basis + 2)
        throw std::invalid_argument("fit_expansion: need at least basis size + 2 samples");
    if (!(s.front().first / s.back().first >= 10.0))
        throw std::invalid_argument("fit_expansion: samples must span at least a decade in eps");

    // every 4th sample is held out for the residual diagnostic
    std::vector<std::size_t> train, held;
    for (std::size_t i = 0; i < s.size(); ++i) (i % 4 == 3 ? held : train).push_back(i);
    if (train.size() < n_basis)
        throw std::invalid_argument("fit_expansion: too few training samples");

    auto row = [&](double eps, Eigen::VectorXd& r) {
        Eigen::Index j = 0;
        for (int k : powers) r(j++) = std::pow(eps, -k);
        if (with_log) r(j++) = std::log(1.0 / eps);
        r(j) = 1.0;
    };

    Eigen::MatrixXd A(train.size(), n_basis);
    Eigen::VectorXd rhs(train.size());
    Eigen::VectorXd r(n_basis);
    for (std::size_t i = 0; i < train.size(); ++i) {
        row(s[train[i]].first, r);
        A.row(i) = r;
        rhs(i) = s[train[i]].second;
    }
    const LsResult ls = solve_scaled_ls(A, rhs);

    ExpansionFit fit;
    fit.n = n;
    fit.power_exponents = powers;
    Eigen::Index j = 0;
    for (std::size_t i = 0; i < powers.size(); ++i) fit.power_coefficients.push_back(ls.coef(j++));
    if (with_log) fit.log_coefficient = ls.coef(j++);
    fit.constant_term = ls.coef(j);
    fit.condition_estimate = ls.condition;

    double rss = 0.0;
    for (std::size_t i : held) {
        const double d = fit.evaluate(s[i].first) - s[i].second;
        rss += d * d;
    }
    fit.residual_norm = held.empty() ? 0.0 : std::sqrt(rss / held.size());
    return fit;
}

EntropyEstimate entropy_limit(std::span<const std::pair<double, double>> diff_samples,
                              EntropyEstimate::Method method) {
    const Samples s = sorted_descending(diff_samples);
    if (s.size() < 6) throw std::invalid_argument("entropy_limit: need at least 6 samples");

    double scale = 0.0;
    for (const auto& [e, v] : s) scale = std::max(scale, std::abs(v));

    // Cauchy tail test: consecutive differences must die out toward small
    // eps, otherwise a divergent part failed to cancel.
    std::vector<double> d;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) d.push_back(s[i + 1].second - s[i].second);
    const std::size_t m = std::min<std::size_t>(5, d.size() / 2);
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        head += std::abs(d[i]);
        tail += std::abs(d[d.size() - 1 - i]);
    }
    head /= m;
    tail /= m;
    // data at round-off scale counts as settled
    const double floor = std::max(1e-13, 1e-9 * scale);
    if (scale > 1e-10 && !(tail <= std::max(0.5 * head, floor))) {
        const double ratio = tail / std::max(head, 1e-300);
        throw DivergentDifferenceError(
            "entropy_limit: truncated differences do not settle (tail/head " +
                std::to_string(ratio) + "); surfaces are incomparable",
            ratio);
    }

    EntropyEstimate out;
    out.method = method;

    if (method == EntropyEstimate::Method::PlainLimit) {
        out.value = s.back().second;
        out.error_bar = std::abs(s.back().second - s[s.size() - 2].second);
        out.eps_sequence = {s[s.size() - 2].first, s.back().first};
        return out;
    }

    // Tail fit against E + a eps + b eps^2 on the smallest-eps samples; the
    // error bar is the last-stage correction |E_2 - E_1| plus the residual.
    const std::size_t tail_count = std::min<std::size_t>(14, s.size());
    const std::size_t start = s.size() - tail_count;

    Eigen::MatrixXd A2(tail_count, 3), A1(tail_count, 2);
    Eigen::VectorXd rhs(tail_count);
    for (std::size_t i = 0; i < tail_count; ++i) {
        const double e = s[start + i].first;
        A2(i, 0) = 1.0;
        A2(i, 1) = e;
        A2(i, 2) = e * e;
        A1(i, 0) = 1.0;
        A1(i, 1) = e;
        rhs(i) = s[start + i].second;
        out.eps_sequence.push_back(e);
    }
    const LsResult fit2 = solve_scaled_ls(A2, rhs);
    const LsResult fit1 = solve_scaled_ls(A1, rhs);

    double rss = 0.0;
    for (std::size_t i = 0; i < tail_count; ++i) {
        const double e = s[start + i].first;
        const double pred = fit2.coef(0) + fit2.coef(1) * e + fit2.coef(2) * e * e;
        rss += (pred - rhs(i)) * (pred - rhs(i));
    }
    out.value = fit2.coef(0);
    out.error_bar = std::abs(fit2.coef(0) - fit1.coef(0)) + 3.0 * std::sqrt(rss / tail_count);
    return out;
}

std::vector<double> default_eps_grid(double eps_max, double eps_min, double ratio) {
    if (!(eps_max > eps_min && eps_min > 0.0 && ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("default_eps_grid: bad parameters");
    std::vector<double> grid;
    for (double e = eps_max; e >= eps_min; e *= ratio) grid.push_back(e);
    return grid;
}

void write_samples_csv(std::ostream& os, std::span<const EpsSample> samples) {
    os << "eps,value,error_bound\n";
    char buf[96];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.eps, s.value, s.error_bound);
        os << buf;
    }
}

std::vector<EpsSample> read_samples_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("samples csv: empty stream");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "eps,value,error_bound")
        throw std::invalid_argument("samples csv: bad header '" + line + "'");
    std::vector<EpsSample> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        EpsSample s{};
        std::istringstream ls(line);
        std::string field;
        double* slots[3] = {&s.eps, &s.value, &s.error_bound};
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(ls, field, ','))
                throw std::invalid_argument("samples csv: line " + std::to_string(lineno) +
                                            ": expected 3 fields");
            std::size_t pos = 0;
            *slots[k] = std::stod(field, &pos);
            if (pos != field.size())
                throw std::invalid_argument("samples csv: line " + std::to_string(lineno) +
                                            ": bad number '" + field + "'");
        }
        if (std::getline(ls, field, ','))
            throw std::invalid_argument("samples csv: line " + std::to_string(lineno) +
                                        ": too many fields");
        out.push_back(s);
    }
    return out;
}

}  // namespace hyprel
