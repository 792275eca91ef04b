#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace copmix {

// A point of the open unit hypercube (0,1)^M. Construction rejects any
// coordinate outside the open interval, including 0 and 1 themselves.
class UnitPoint {
public:
    explicit UnitPoint(std::vector<double> coords);
    UnitPoint(std::initializer_list<double> coords) : UnitPoint(std::vector<double>(coords)) {}

    // Clamps into [eps, 1 - eps] before validating. Diagnostics only; core
    // evaluation must go through the checked constructor.
    static UnitPoint clamped(std::span<const double> coords, double eps = 1e-12);

    std::size_t dim() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> coords() const { return coords_; }

    bool operator==(const UnitPoint&) const = default;

private:
    std::vector<double> coords_;
};

// 1_M - u.
UnitPoint radial_reflection(const UnitPoint& u);

// u_sigma = (u_{sigma(0)}, ..., u_{sigma(M-1)}). Throws if sigma is not a
// permutation of 0..M-1.
UnitPoint permute(const UnitPoint& u, std::span<const std::size_t> sigma);

// Nudges a sampler output that rounded onto 0 or 1 back inside the open interval.
double open_unit(double u);

} // namespace copmix
