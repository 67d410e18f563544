#pragma once

// Reference computations written independently of the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n = 20000) {
    if (n % 2) ++n;
    const double h = (b - a) / static_cast<double>(n);
    long double s = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) {
        s += (i % 2 ? 4.0L : 2.0L) * f(a + static_cast<double>(i) * h);
    }
    return static_cast<double>(s * h / 3.0L);
}

/// Scalar RK4 for x' = f(t, x) on [t0, t1] with n steps; returns the n + 1 iterates.
inline std::vector<double> rk4(const std::function<double(double, double)>& f, double x0, double t0,
                               double t1, std::size_t n) {
    std::vector<double> xs{x0};
    const double h = (t1 - t0) / static_cast<double>(n);
    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        const double a = f(t, x);
        const double b = f(t + h / 2, x + h / 2 * a);
        const double c = f(t + h / 2, x + h / 2 * b);
        const double d = f(t + h, x + h * c);
        x += h * (a + 2 * b + 2 * c + d) / 6;
        xs.push_back(x);
    }
    return xs;
}

struct MeanSe {
    double mean;
    double se;
};

/// Two-pass sample mean and standard error.
inline MeanSe mean_se(const std::vector<double>& xs) {
    long double s = 0;
    for (double x : xs) s += x;
    const double m = static_cast<double>(s / xs.size());
    long double q = 0;
    for (double x : xs) q += (x - m) * (x - m);
    const double var = static_cast<double>(q / (xs.size() - 1));
    return {m, std::sqrt(var / static_cast<double>(xs.size()))};
}

/// The additive term only absorbs rounding when every sample is identical.
inline bool within_4se(const MeanSe& s, double target) {
    return std::abs(s.mean - target) <= 4.0 * s.se + 1e-14 * std::max(1.0, std::abs(target));
}

/// Kolmogorov-Smirnov distance between the sample and a continuous CDF.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Asymptotic KS critical value at significance 0.01.
inline double ks_critical_01(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

/// Central finite difference.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
