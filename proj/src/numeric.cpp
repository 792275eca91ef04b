#include "copmix/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "copmix/errors.hpp"

namespace copmix {

double bisect_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, double tol) {
    if (!(lo < hi)) throw DomainError("bisect_increasing: empty bracket");
    if (f(lo) >= target) return lo;
    if (f(hi) <= target) return hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double log_sum_exp(std::span<const double> v) {
    if (v.empty()) return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

namespace {

double mixed_partial_rec(const std::function<double(std::span<const double>)>& cdf,
                         std::vector<double>& point, std::size_t level) {
    if (level == point.size()) return cdf(point);
    const double centre = point[level];
    const double h = 1e-4 * std::min(centre, 1.0 - centre);
    point[level] = centre + h;
    const double up = mixed_partial_rec(cdf, point, level + 1);
    point[level] = centre - h;
    const double down = mixed_partial_rec(cdf, point, level + 1);
    point[level] = centre;
    return (up - down) / (2.0 * h);
}

} // namespace

double mixed_partial(const std::function<double(std::span<const double>)>& cdf,
                     std::span<const double> u) {
    for (double x : u) {
        if (!(x > 0.0 && x < 1.0)) throw DomainError("mixed_partial: point outside (0,1)^M");
    }
    std::vector<double> point(u.begin(), u.end());
    return mixed_partial_rec(cdf, point, 0);
}

} // namespace copmix
