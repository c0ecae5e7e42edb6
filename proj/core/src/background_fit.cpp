#include "ionsense/background_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ionsense::analysis {

namespace {

struct NormalEquations {
    double jaa = 0, jak = 0, jkk = 0;  // J^T W J
    double ga = 0, gk = 0;             // J^T W r
    double cost = 0;
};

NormalEquations accumulate(const ArrivalHistogram& hist, std::size_t start, double a, double k) {
    NormalEquations eq;
    for (std::size_t i = start; i < hist.size(); ++i) {
        const double t = hist.bin_center(i);
        const double c = static_cast<double>(hist.counts[i]);
        const double w = 1.0 / std::max(c, 1.0);  // 1/sigma^2, Poisson-motivated
        const double e = std::exp(std::clamp(-k * t, -700.0, 700.0));
        const double model = a * e;
        const double r = c - model;
        const double da = e;            // d model / d A
        const double dk = -a * t * e;   // d model / d k
        eq.jaa += w * da * da;
        eq.jak += w * da * dk;
        eq.jkk += w * dk * dk;
        eq.ga += w * da * r;
        eq.gk += w * dk * r;
        eq.cost += w * r * r;
    }
    return eq;
}

}  // namespace

ExponentialFit fit_exponential_background(const ArrivalHistogram& hist, double fit_start) {
    if (hist.size() == 0) throw std::invalid_argument("fit_exponential_background: empty histogram");

    std::size_t start = 0;
    while (start < hist.size() && hist.bin_center(start) < fit_start) ++start;
    if (hist.size() - start < 5)
        throw std::invalid_argument("fit_exponential_background: fewer than 5 usable bins");

    // Log-linear start values from the positive bins.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n_pos = 0;
    for (std::size_t i = start; i < hist.size(); ++i) {
        if (hist.counts[i] == 0) continue;
        const double t = hist.bin_center(i);
        const double y = std::log(static_cast<double>(hist.counts[i]));
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++n_pos;
    }
    if (n_pos == 0) throw std::invalid_argument("fit_exponential_background: all counts are zero");

    double a, k;
    const double span = hist.bin_edges.back() - hist.bin_center(start);
    if (n_pos >= 2) {
        const double denom = n_pos * sxx - sx * sx;
        const double slope = denom != 0.0 ? (n_pos * sxy - sx * sy) / denom : 0.0;
        const double intercept = (sy - slope * sx) / static_cast<double>(n_pos);
        k = -slope;
        a = std::exp(std::clamp(intercept, -700.0, 700.0));
    } else {
        a = sy != 0.0 ? std::exp(sy) : 1.0;
        k = 1.0 / span;
    }
    if (!std::isfinite(k)) k = 1.0 / span;
    if (!std::isfinite(a) || a <= 0.0) a = std::max(1.0, static_cast<double>(hist.counts[start]));

    // Levenberg-Marquardt on (A, k = 1/tau).
    double lambda = 1e-3;
    NormalEquations eq = accumulate(hist, start, a, k);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        const double jaa = eq.jaa * (1.0 + lambda);
        const double jkk = eq.jkk * (1.0 + lambda);
        const double det = jaa * jkk - eq.jak * eq.jak;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double da = (jkk * eq.ga - eq.jak * eq.gk) / det;
        const double dk = (jaa * eq.gk - eq.jak * eq.ga) / det;
        const auto trial = accumulate(hist, start, a + da, k + dk);
        if (trial.cost <= eq.cost) {
            const double improvement = eq.cost - trial.cost;
            a += da;
            k += dk;
            eq = trial;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (improvement <= 1e-12 * (eq.cost + 1e-300)) {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }
    if (!converged && !(eq.cost >= 0.0 && std::isfinite(eq.cost)))
        throw std::runtime_error("fit_exponential_background: did not converge");
    if (!std::isfinite(a) || !std::isfinite(k))
        throw std::runtime_error("fit_exponential_background: did not converge");

    ExponentialFit fit;
    fit.amplitude = a;
    fit.decay_time = k != 0.0 ? 1.0 / k : std::numeric_limits<double>::infinity();
    fit.fit_start_index = start;
    fit.residuals.resize(hist.size());
    for (std::size_t i = 0; i < hist.size(); ++i) {
        const double t = hist.bin_center(i);
        const double model = a * std::exp(std::clamp(-k * t, -700.0, 700.0));
        fit.residuals[i] = static_cast<double>(hist.counts[i]) - model;
    }
    return fit;
}

double amplitude_proxy(const ArrivalHistogram& hist) {
    const double total = static_cast<double>(hist.total_counts());
    if (total == 0.0) throw std::invalid_argument("amplitude_proxy: zero total counts");
    double mean = 0.0;
    for (std::size_t i = 0; i < hist.size(); ++i)
        mean += static_cast<double>(hist.counts[i]) * hist.bin_center(i);
    mean /= total;
    double var = 0.0;
    for (std::size_t i = 0; i < hist.size(); ++i) {
        const double d = hist.bin_center(i) - mean;
        var += static_cast<double>(hist.counts[i]) * d * d;
    }
    return std::sqrt(var / total);
}

double amplitude_proxy(std::span<const double> residuals) {
    if (residuals.empty()) throw std::invalid_argument("amplitude_proxy: empty residuals");
    double mean = 0.0;
    for (double r : residuals) mean += r;
    mean /= static_cast<double>(residuals.size());
    double var = 0.0;
    for (double r : residuals) var += (r - mean) * (r - mean);
    return std::sqrt(var / static_cast<double>(residuals.size()));
}

}  // namespace ionsense::analysis
