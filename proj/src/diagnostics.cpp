#include "copmix/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "copmix/errors.hpp"
#include "copmix/rng.hpp"

namespace copmix {

std::string to_string(GapKind kind) {
    return kind == GapKind::Exchangeability ? "exchangeability" : "radial_symmetry";
}

std::string to_string(NormKind kind) { return kind == NormKind::L1 ? "L1" : "Linf"; }

namespace {

GapReport make_gap(GapKind kind, const UnitPoint& u, const UnitPoint& v, double fu, double fv) {
    GapReport r;
    r.kind = kind;
    r.witness = u;
    r.counterpart = v;
    r.value_at_witness = fu;
    r.value_at_counterpart = fv;
    r.eta = std::fabs(fu - fv);
    r.implied_epsilon = r.eta / 2.0;
    return r;
}

} // namespace

GapReport exchangeability_gap(const DensityFn& f, std::span<const PermutedPoint> points) {
    if (points.empty()) throw DomainError("exchangeability_gap: no points supplied");
    GapReport best;
    bool first = true;
    for (const auto& [u, sigma] : points) {
        const UnitPoint v = permute(u, sigma);
        GapReport cand = make_gap(GapKind::Exchangeability, u, v, f(u), f(v));
        if (first || cand.eta > best.eta) {
            best = std::move(cand);
            first = false;
        }
    }
    return best;
}

GapReport radial_symmetry_gap(const DensityFn& f, std::span<const UnitPoint> points) {
    if (points.empty()) throw DomainError("radial_symmetry_gap: no points supplied");
    GapReport best;
    bool first = true;
    for (const auto& u : points) {
        const UnitPoint v = radial_reflection(u);
        GapReport cand = make_gap(GapKind::RadialSymmetry, u, v, f(u), f(v));
        if (first || cand.eta > best.eta) {
            best = std::move(cand);
            first = false;
        }
    }
    return best;
}

std::vector<UnitPoint> midpoint_grid(std::size_t grid_per_dim, std::size_t dim) {
    if (grid_per_dim == 0 || dim == 0) throw DomainError("midpoint_grid: empty grid");
    std::size_t total = 1;
    for (std::size_t d = 0; d < dim; ++d) total *= grid_per_dim;
    std::vector<UnitPoint> out;
    out.reserve(total);
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> coords(dim);
    const double g = static_cast<double>(grid_per_dim);
    for (std::size_t k = 0; k < total; ++k) {
        for (std::size_t d = 0; d < dim; ++d) coords[d] = (static_cast<double>(idx[d]) + 0.5) / g;
        out.emplace_back(coords);
        // last coordinate varies fastest
        for (std::size_t d = dim; d-- > 0;) {
            if (++idx[d] < grid_per_dim) break;
            idx[d] = 0;
        }
    }
    return out;
}

std::vector<UnitPoint> default_radial_points() {
    auto pts = midpoint_grid(33, 2);
    pts.push_back(UnitPoint{1.0 / 3.0, 2.0 / 3.0});
    pts.push_back(UnitPoint{0.1, 0.5});
    return pts;
}

std::vector<PermutedPoint> default_exchange_points() {
    const std::vector<std::size_t> swap{1, 0};
    std::vector<PermutedPoint> out;
    for (auto& u : default_radial_points()) out.emplace_back(std::move(u), swap);
    return out;
}

DistanceEstimate l1_distance(const DensityFn& f, const DensityFn& g, std::size_t dim,
                             std::size_t n_samples, std::uint64_t seed) {
    if (dim == 0) throw DomainError("l1_distance: dimension must be at least 1");
    if (n_samples < 2) throw DomainError("l1_distance: need at least two samples");
    Rng rng(seed);
    std::vector<double> coords(dim);
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        for (auto& c : coords) c = rng.uniform();
        const UnitPoint u(coords);
        const double d = std::fabs(f(u) - g(u));
        if (!std::isfinite(d)) throw NumericalError("l1_distance: density returned a non-finite value");
        // Welford update
        const double delta = d - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (d - mean);
    }
    const double var = m2 / static_cast<double>(n_samples - 1);
    DistanceEstimate out;
    out.norm = NormKind::L1;
    out.estimate = mean;
    out.std_error = std::sqrt(var / static_cast<double>(n_samples));
    out.size = n_samples;
    out.seed = seed;
    return out;
}

DistanceEstimate linf_distance(const DensityFn& f, const DensityFn& g, std::size_t dim,
                               std::size_t grid_per_dim, std::span<const UnitPoint> witnesses) {
    if (grid_per_dim < 8) throw DomainError("linf_distance: grid_per_dim must be at least 8");
    if (dim == 0 || dim > 3) throw DomainError("linf_distance: grid evaluation supports dimension 1 to 3");
    auto pts = midpoint_grid(grid_per_dim, dim);
    for (const auto& w : witnesses) {
        if (w.dim() != dim) throw DomainError("linf_distance: witness dimension mismatch");
        pts.push_back(w);
    }
    double best = 0.0;
    for (const auto& u : pts) {
        const double d = std::fabs(f(u) - g(u));
        if (!std::isfinite(d)) throw NumericalError("linf_distance: density returned a non-finite value");
        best = std::max(best, d);
    }
    DistanceEstimate out;
    out.norm = NormKind::Linf;
    out.estimate = best;
    out.grid_resolution = grid_per_dim;
    out.size = pts.size();
    return out;
}

KsResult ks_uniformity(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n < 20) throw DomainError("ks_uniformity: need at least 20 values");
    std::vector<double> x(sample.begin(), sample.end());
    for (double v : x) {
        if (!(v > 0.0 && v < 1.0)) throw DomainError("ks_uniformity: values must lie strictly inside (0,1)");
    }
    std::sort(x.begin(), x.end());
    const double nd = static_cast<double>(n);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = static_cast<double>(i) / nd;
        const double hi = static_cast<double>(i + 1) / nd;
        d = std::max({d, hi - x[i], x[i] - lo});
    }
    KsResult r;
    r.statistic = d;
    r.n = n;
    r.critical_1pct = 1.63 / std::sqrt(nd);
    r.critical_5pct = 1.36 / std::sqrt(nd);
    r.reject_1pct = d > r.critical_1pct;
    r.reject_5pct = d > r.critical_5pct;
    return r;
}

nlohmann::json to_json(const GapReport& r) {
    auto coords = [](const UnitPoint& u) { return std::vector<double>(u.coords().begin(), u.coords().end()); };
    return {{"kind", to_string(r.kind)},
            {"witness", coords(r.witness)},
            {"counterpart", coords(r.counterpart)},
            {"value_at_witness", r.value_at_witness},
            {"value_at_counterpart", r.value_at_counterpart},
            {"eta", r.eta},
            {"implied_epsilon", r.implied_epsilon}};
}

nlohmann::json to_json(const DistanceEstimate& d) {
    nlohmann::json j{{"norm", to_string(d.norm)}, {"estimate", d.estimate}, {"size", d.size}};
    if (d.norm == NormKind::L1) {
        j["std_error"] = d.std_error;
        j["seed"] = d.seed;
    } else {
        j["grid_resolution"] = d.grid_resolution;
    }
    return j;
}

nlohmann::json to_json(const KsResult& k) {
    return {{"statistic", k.statistic},       {"n", k.n},
            {"critical_1pct", k.critical_1pct}, {"critical_5pct", k.critical_5pct},
            {"reject_1pct", k.reject_1pct},     {"reject_5pct", k.reject_5pct}};
}

} // namespace copmix
