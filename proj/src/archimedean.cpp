#include "copmix/archimedean.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "copmix/errors.hpp"

namespace copmix {

std::string to_string(ArchimedeanFamily f) {
    switch (f) {
    case ArchimedeanFamily::Clayton: return "clayton";
    case ArchimedeanFamily::AliMikhailHaq: return "amh";
    case ArchimedeanFamily::Gumbel: return "gumbel";
    case ArchimedeanFamily::Frank: return "frank";
    }
    return "unknown";
}

ArchimedeanFamily archimedean_family_from_string(const std::string& name) {
    if (name == "clayton") return ArchimedeanFamily::Clayton;
    if (name == "amh") return ArchimedeanFamily::AliMikhailHaq;
    if (name == "gumbel") return ArchimedeanFamily::Gumbel;
    if (name == "frank") return ArchimedeanFamily::Frank;
    throw DomainError("unknown Archimedean family '" + name + "'");
}

namespace {

void check_theta(ArchimedeanFamily family, double theta) {
    if (!std::isfinite(theta)) throw DomainError("Archimedean generator: theta must be finite");
    switch (family) {
    case ArchimedeanFamily::Clayton:
        if (!(theta > 0.0)) throw DomainError("Clayton generator: theta must be > 0");
        break;
    case ArchimedeanFamily::AliMikhailHaq:
        if (!(theta >= 0.0 && theta < 1.0)) throw DomainError("AMH generator: theta must lie in [0,1)");
        break;
    case ArchimedeanFamily::Gumbel:
        if (!(theta >= 1.0)) throw DomainError("Gumbel generator: theta must be >= 1");
        break;
    case ArchimedeanFamily::Frank:
        if (!(theta > 0.0)) throw DomainError("Frank generator: theta must be > 0");
        break;
    }
}

} // namespace

ArchimedeanGenerator::ArchimedeanGenerator(ArchimedeanFamily family, double theta)
    : family_(family), theta_(theta) {
    check_theta(family, theta);
}

double ArchimedeanGenerator::phi(double t) const {
    if (!(t >= 0.0)) throw DomainError("phi: argument must be >= 0");
    if (t == 0.0) return 1.0;
    switch (family_) {
    case ArchimedeanFamily::Clayton:
        return std::exp(-std::log1p(t) / theta_);
    case ArchimedeanFamily::AliMikhailHaq:
        // (1 - theta) / (e^t - theta) = (1 - theta) / (expm1(t) + 1 - theta)
        return (1.0 - theta_) / (std::expm1(t) + (1.0 - theta_));
    case ArchimedeanFamily::Gumbel:
        return std::exp(-std::pow(t, 1.0 / theta_));
    case ArchimedeanFamily::Frank: {
        // 1 + e^{-t}(e^{-theta} - 1) loses everything to cancellation for
        // small t; rewrite it as (1 - e^{-t}) + e^{-t-theta} there.
        const double x = std::exp(-t) * std::expm1(-theta_);
        if (x > -0.5) return -std::log1p(x) / theta_;
        return -std::log(-std::expm1(-t) + std::exp(-t - theta_)) / theta_;
    }
    }
    return 0.0;
}

double ArchimedeanGenerator::phi_inverse(double u) const {
    if (!(u > 0.0 && u <= 1.0)) throw DomainError("phi_inverse: argument must lie in (0,1]");
    switch (family_) {
    case ArchimedeanFamily::Clayton:
        return std::expm1(-theta_ * std::log(u));
    case ArchimedeanFamily::AliMikhailHaq:
        // log((1 - theta)/u + theta) = log1p((1 - theta)(1 - u)/u)
        return std::log1p((1.0 - theta_) * (1.0 - u) / u);
    case ArchimedeanFamily::Gumbel:
        return std::pow(-std::log(u), theta_);
    case ArchimedeanFamily::Frank: {
        if (u < 0.5) return -std::log(std::expm1(-theta_ * u) / std::expm1(-theta_));
        // ratio = 1 - d / (1 - e^{-theta}) with d = e^{-theta u} - e^{-theta}
        // formed without cancellation; 1 - u is exact here.
        const double d = -std::exp(-theta_ * u) * std::expm1(-theta_ * (1.0 - u));
        return -std::log1p(d / std::expm1(-theta_));
    }
    }
    return 0.0;
}

double archimedean_cdf(const ArchimedeanGenerator& g, std::span<const double> u) {
    if (u.empty()) throw DomainError("archimedean_cdf: empty point");
    std::vector<double> terms(u.size());
    for (std::size_t m = 0; m < u.size(); ++m) {
        if (!(u[m] >= 0.0 && u[m] <= 1.0)) throw DomainError("archimedean_cdf: argument outside [0,1]");
        if (u[m] == 0.0) return 0.0;
        terms[m] = g.phi_inverse(u[m]);
    }
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double x : terms) s += x;
    return g.phi(s);
}

// ---------------------------------------------------------------------------

LatentSampler::LatentSampler(ArchimedeanFamily family, double theta, std::uint64_t seed)
    : family_(family), theta_(theta), rng_(seed) {
    check_theta(family, theta);
    if (family_ != ArchimedeanFamily::Frank) return;

    frank_p_ = -std::expm1(-theta_);
    double pmf = frank_p_ / theta_;
    double cum = 0.0;
    std::vector<double> table;
    for (std::size_t d = 1; d <= kMaxFrankTable; ++d) {
        cum += pmf;
        table.push_back(cum);
        if (1.0 - cum < 1e-12) {
            frank_cdf_ = std::move(table);
            return;
        }
        pmf *= frank_p_ * static_cast<double>(d) / static_cast<double>(d + 1);
    }
    // Tail too heavy for a table (theta large); frank_cdf_ stays empty.
}

double LatentSampler::draw_frank() {
    if (!frank_cdf_.empty()) {
        const double u = rng_.uniform();
        const auto it = std::lower_bound(frank_cdf_.begin(), frank_cdf_.end(), u);
        if (it != frank_cdf_.end()) return static_cast<double>(it - frank_cdf_.begin() + 1);
        // Beyond the cached mass: extend the inversion term by term.
        double d = static_cast<double>(frank_cdf_.size());
        double cum = frank_cdf_.back();
        double pmf = frank_p_ / theta_;
        for (double k = 1.0; k <= d; k += 1.0) pmf *= frank_p_ * k / (k + 1.0);
        while (cum < u && pmf > 0.0) {
            d += 1.0;
            cum += pmf;
            pmf *= frank_p_ * d / (d + 1.0);
        }
        return d;
    }
    // D | Q ~ Geometric with Pr[D >= k] = Q^{k-1}, Q = 1 - (1 - p)^W, W uniform;
    // integrating W out gives the logarithmic-series law exactly.
    const double w = rng_.uniform();
    const double v = rng_.uniform();
    const double q = -std::expm1(-theta_ * w);
    if (!(q > 0.0)) return 1.0;
    if (q >= 1.0) return 1.0;
    return 1.0 + std::floor(std::log(v) / std::log(q));
}

double LatentSampler::draw() {
    switch (family_) {
    case ArchimedeanFamily::Clayton:
        return std::max(rng_.gamma(1.0 / theta_), std::numeric_limits<double>::denorm_min());
    case ArchimedeanFamily::AliMikhailHaq: {
        if (theta_ == 0.0) return 1.0;
        const double u = rng_.uniform();
        return 1.0 + std::floor(std::log(u) / std::log(theta_));
    }
    case ArchimedeanFamily::Gumbel: {
        if (theta_ == 1.0) return 1.0;
        // Kanter's representation of the totally skewed positive stable law,
        // the Chambers-Mallows-Stuck construction at skewness 1.
        const double a = 1.0 / theta_;
        const double angle = std::numbers::pi * rng_.uniform();
        const double w = rng_.exponential();
        const double lead = std::sin(a * angle) / std::pow(std::sin(angle), 1.0 / a);
        const double tail = std::pow(std::sin((1.0 - a) * angle) / w, (1.0 - a) / a);
        return std::max(lead * tail, std::numeric_limits<double>::denorm_min());
    }
    case ArchimedeanFamily::Frank:
        return draw_frank();
    }
    return 1.0;
}

std::vector<double> LatentSampler::sample(std::size_t n) {
    if (n == 0) throw DomainError("sample_latent: n must be at least 1");
    std::vector<double> out(n);
    for (double& d : out) d = draw();
    return out;
}

std::vector<UnitPoint> kimberling_sample(const ArchimedeanGenerator& g, LatentSampler& s,
                                         std::size_t n, std::size_t dim) {
    if (g.family() != s.family() || g.theta() != s.theta()) {
        throw DomainError("kimberling_sample: generator and latent sampler do not match");
    }
    if (dim < 1) throw DomainError("kimberling_sample: dimension must be at least 1");
    std::vector<UnitPoint> out;
    out.reserve(n);
    std::vector<double> row(dim);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = s.draw();
        for (std::size_t m = 0; m < dim; ++m) {
            row[m] = open_unit(g.phi(s.rng().exponential() / d));
        }
        out.emplace_back(row);
    }
    return out;
}

} // namespace copmix
