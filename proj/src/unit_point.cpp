#include "copmix/unit_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "copmix/errors.hpp"

namespace copmix {

UnitPoint::UnitPoint(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw DomainError("UnitPoint: dimension must be at least 1");
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        const double c = coords_[i];
        if (!(c > 0.0 && c < 1.0)) {
            throw DomainError("UnitPoint: coordinate " + std::to_string(i) +
                              " outside the open interval (0,1)");
        }
    }
}

UnitPoint UnitPoint::clamped(std::span<const double> coords, double eps) {
    std::vector<double> c(coords.begin(), coords.end());
    for (double& x : c) {
        if (std::isnan(x)) throw DomainError("UnitPoint::clamped: NaN coordinate");
        x = std::clamp(x, eps, 1.0 - eps);
    }
    return UnitPoint(std::move(c));
}

UnitPoint radial_reflection(const UnitPoint& u) {
    std::vector<double> r(u.dim());
    for (std::size_t i = 0; i < u.dim(); ++i) r[i] = 1.0 - u[i];
    return UnitPoint(std::move(r));
}

UnitPoint permute(const UnitPoint& u, std::span<const std::size_t> sigma) {
    if (sigma.size() != u.dim()) throw DomainError("permute: permutation length mismatch");
    std::vector<bool> seen(u.dim(), false);
    std::vector<double> r(u.dim());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const std::size_t j = sigma[i];
        if (j >= u.dim() || seen[j]) throw DomainError("permute: not a permutation");
        seen[j] = true;
        r[i] = u[j];
    }
    return UnitPoint(std::move(r));
}

double open_unit(double u) {
    if (u <= 0.0) return std::numeric_limits<double>::denorm_min();
    if (u >= 1.0) return std::nextafter(1.0, 0.0);
    return u;
}

} // namespace copmix
