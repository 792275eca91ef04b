#pragma once

// Reference computations used only by the tests. Each is written
// independently of the library code it checks: different algorithms, long
// double arithmetic, or brute-force evaluation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

// Upper tail 1 - Phi(x) for x > 0 from the Laplace continued fraction
//   phi(x) / (x + 1/(x + 2/(x + 3/(x + ...)))),
// evaluated backwards in long double.
inline long double normal_upper_tail(long double x) {
    long double frac = x;
    for (int k = 400; k >= 1; --k) frac = x + k / frac;
    return std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L) / frac;
}

// Normal CDF. Taylor series
//   Phi(x) = 1/2 + phi(x) sum_k x^{2k+1} / (1 * 3 * ... * (2k+1))
// for |x| <= 3, the continued fraction beyond.
inline long double normal_cdf(long double x) {
    if (x < -3.0L) return normal_upper_tail(-x);
    if (x > 3.0L) return 1.0L - normal_upper_tail(x);
    const long double pdf = std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
    long double term = x;
    long double sum = x;
    for (int k = 1; k < 500; ++k) {
        term *= x * x / (2.0L * k + 1.0L);
        sum += term;
        if (std::fabs(term) < 1e-30L * std::fabs(sum)) break;
    }
    return 0.5L + pdf * sum;
}

// Normal quantile by bisection against the series CDF.
inline long double normal_quantile(long double p) {
    long double lo = -9.0L;
    long double hi = 9.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5L * (lo + hi);
}

inline long double normal_pdf(long double x, long double mu = 0.0L, long double sd = 1.0L) {
    const long double z = (x - mu) / sd;
    return std::exp(-0.5L * z * z) / (sd * std::sqrt(2.0L * 3.14159265358979323846264338327950288L));
}

// Direct evaluation of the non-exchangeable example copula.
inline long double example_cdf(long double u, long double v, long double a, long double b, long double t) {
    const long double s = std::pow(u, -t * a) + std::pow(v, -t * b) - 1.0L;
    return std::pow(u, 1.0L - a) * std::pow(v, 1.0L - b) * std::pow(s, -1.0L / t);
}

// Central mixed difference of a bivariate CDF with fixed step h.
inline long double mixed_difference(const std::function<long double(long double, long double)>& c, long double u,
                                    long double v, long double h) {
    return (c(u + h, v + h) - c(u + h, v - h) - c(u - h, v + h) + c(u - h, v - h)) / (4.0L * h * h);
}

// Bivariate Clayton with theta = 1.
inline double clayton1_density(double u, double v) {
    const double s = u + v - u * v;
    return 2.0 * u * v / (s * s * s);
}

// Midpoint-rule integral of f over (0,1)^2 on a g x g grid.
inline double grid_integral_2d(const std::function<double(double, double)>& f, std::size_t g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) {
            sum += f((i + 0.5) / static_cast<double>(g), (j + 0.5) / static_cast<double>(g));
        }
    }
    return sum / static_cast<double>(g * g);
}

// Empirical CDF of bivariate points at (a, b).
inline double empirical_cdf2(const std::vector<std::pair<double, double>>& pts, double a, double b) {
    std::size_t count = 0;
    for (const auto& [x, y] : pts) count += (x <= a && y <= b) ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(pts.size());
}

// Kolmogorov-Smirnov statistic against Uniform(0,1), brute force over the
// sorted sample.
inline double ks_uniform(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d = std::max(d, std::fabs((i + 1) / n - x[i]));
        d = std::max(d, std::fabs(x[i] - i / n));
    }
    return d;
}

} // namespace oracle
