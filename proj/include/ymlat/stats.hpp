#pragma once

// Small statistics helpers shared by the experiments and tests.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace ymlat::stats {

inline double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Unbiased sample variance.
inline double variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

inline double median(std::vector<double> x) {
    if (x.empty()) throw std::invalid_argument("median of empty sample");
    const auto mid = x.begin() + static_cast<std::ptrdiff_t>(x.size() / 2);
    std::nth_element(x.begin(), mid, x.end());
    if (x.size() % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(x.begin(), mid);
    return 0.5 * (lo + hi);
}

// Least-squares slope of y against x.
inline double slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope: need matching samples");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxy / sxx;
}

// Integrated autocorrelation time with Sokal's automatic window (c = 5).
inline double integrated_autocorrelation(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) return 0.5;
    const double m = mean(x);
    double c0 = 0.0;
    for (double v : x) c0 += (v - m) * (v - m);
    c0 /= static_cast<double>(n);
    if (c0 <= 0.0) return 0.5;
    double tau = 0.5;
    for (std::size_t t = 1; t < n / 2; ++t) {
        double c = 0.0;
        for (std::size_t k = 0; k + t < n; ++k) c += (x[k] - m) * (x[k + t] - m);
        c /= static_cast<double>(n);
        tau += c / c0;
        if (static_cast<double>(t) >= 5.0 * tau) break;
    }
    return std::max(tau, 0.5);
}

// Standard error of the mean from non-overlapping batch means.
inline double batch_means_error(std::span<const double> x, std::size_t batches = 32) {
    const std::size_t n = x.size();
    if (n < 2 * batches) batches = std::max<std::size_t>(2, n / 2);
    const std::size_t len = n / batches;
    if (len == 0) return 0.0;
    std::vector<double> b(batches);
    for (std::size_t k = 0; k < batches; ++k)
        b[k] = mean(x.subspan(k * len, len));
    return std::sqrt(variance(b) / static_cast<double>(batches));
}

} // namespace ymlat::stats
