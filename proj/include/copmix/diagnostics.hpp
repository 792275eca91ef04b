#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "copmix/unit_point.hpp"
#include "json.hpp"

namespace copmix {

using DensityFn = std::function<double(const UnitPoint&)>;

enum class GapKind { Exchangeability, RadialSymmetry };
std::string to_string(GapKind kind);

// Largest |f(u) - f(u')| found over the supplied pairs, where u' is a
// coordinate permutation of u or its radial reflection.
struct GapReport {
    GapKind kind = GapKind::Exchangeability;
    UnitPoint witness{0.5};
    UnitPoint counterpart{0.5};
    double value_at_witness = 0.0;
    double value_at_counterpart = 0.0;
    double eta = 0.0;
    double implied_epsilon = 0.0; // eta / 2
};

using PermutedPoint = std::pair<UnitPoint, std::vector<std::size_t>>;

GapReport exchangeability_gap(const DensityFn& f, std::span<const PermutedPoint> points);
GapReport radial_symmetry_gap(const DensityFn& f, std::span<const UnitPoint> points);

// Midpoints ((j+1/2)/g, (k+1/2)/g) of a g x g grid.
std::vector<UnitPoint> midpoint_grid(std::size_t grid_per_dim, std::size_t dim);

// Default search sets in two dimensions: the 33 x 33 midpoint grid plus the
// witnesses (1/3, 2/3) and (0.1, 0.5). Exchangeability pairs use the swap.
std::vector<UnitPoint> default_radial_points();
std::vector<PermutedPoint> default_exchange_points();

enum class NormKind { L1, Linf };
std::string to_string(NormKind kind);

struct DistanceEstimate {
    NormKind norm = NormKind::L1;
    double estimate = 0.0;
    double std_error = 0.0;        // Monte Carlo standard error; 0 for Linf
    std::size_t grid_resolution = 0; // points per axis; 0 for L1
    std::size_t size = 0;          // samples or evaluated points
    std::uint64_t seed = 0;
};

// Monte Carlo estimate of the integral of |f - g| over (0,1)^dim from
// n_samples uniform points.
DistanceEstimate l1_distance(const DensityFn& f, const DensityFn& g, std::size_t dim,
                             std::size_t n_samples, std::uint64_t seed);

// max |f - g| over the midpoint grid plus the given witness points.
// Requires grid_per_dim >= 8 and dim <= 3.
DistanceEstimate linf_distance(const DensityFn& f, const DensityFn& g, std::size_t dim,
                               std::size_t grid_per_dim,
                               std::span<const UnitPoint> witnesses = {});

struct KsResult {
    double statistic = 0.0;
    std::size_t n = 0;
    double critical_1pct = 0.0; // 1.63 / sqrt(n)
    double critical_5pct = 0.0; // 1.36 / sqrt(n)
    bool reject_1pct = false;
    bool reject_5pct = false;
};

// One-sample Kolmogorov-Smirnov test against Uniform(0,1). Requires n >= 20
// and every value strictly inside (0,1).
KsResult ks_uniformity(std::span<const double> sample);

nlohmann::json to_json(const GapReport& r);
nlohmann::json to_json(const DistanceEstimate& d);
nlohmann::json to_json(const KsResult& k);

} // namespace copmix
