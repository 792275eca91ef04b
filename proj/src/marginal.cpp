#include "copmix/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "copmix/errors.hpp"
#include "copmix/normal_dist.hpp"
#include "copmix/numeric.hpp"

namespace copmix {

namespace {

void require_unit(double u, const char* who) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError(std::string(who) + ": argument outside (0,1)");
}

} // namespace

double Marginal::log_pdf(double x) const { return std::log(pdf(x)); }

// ---------------------------------------------------------------------------

NormalMarginal::NormalMarginal(double mean, double sd) : mean_(mean), sd_(sd) {
    if (!std::isfinite(mean) || !(sd > 0.0) || !std::isfinite(sd)) {
        throw DomainError("NormalMarginal: need finite mean and positive sd");
    }
}

double NormalMarginal::cdf(double x) const { return normal::cdf((x - mean_) / sd_); }

double NormalMarginal::quantile(double u) const {
    require_unit(u, "NormalMarginal::quantile");
    return mean_ + sd_ * normal::quantile(u);
}

double NormalMarginal::pdf(double x) const { return std::exp(log_pdf(x)); }

double NormalMarginal::log_pdf(double x) const {
    return normal::log_pdf((x - mean_) / sd_) - std::log(sd_);
}

std::string NormalMarginal::id() const {
    return (mean_ == 0.0 && sd_ == 1.0) ? "normal" : "normal(custom)";
}

// ---------------------------------------------------------------------------

LogisticMarginal::LogisticMarginal(double location, double scale)
    : location_(location), scale_(scale) {
    if (!std::isfinite(location) || !(scale > 0.0) || !std::isfinite(scale)) {
        throw DomainError("LogisticMarginal: need finite location and positive scale");
    }
}

double LogisticMarginal::cdf(double x) const {
    const double t = (x - location_) / scale_;
    return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

double LogisticMarginal::quantile(double u) const {
    require_unit(u, "LogisticMarginal::quantile");
    return location_ + scale_ * (std::log(u) - std::log1p(-u));
}

double LogisticMarginal::pdf(double x) const { return std::exp(log_pdf(x)); }

double LogisticMarginal::log_pdf(double x) const {
    const double t = std::fabs((x - location_) / scale_);
    return -t - 2.0 * std::log1p(std::exp(-t)) - std::log(scale_);
}

std::string LogisticMarginal::id() const {
    return (location_ == 0.0 && scale_ == 1.0) ? "logistic" : "logistic(custom)";
}

// ---------------------------------------------------------------------------

NormalMixtureMarginal::NormalMixtureMarginal(std::vector<double> weights,
                                             std::vector<double> means, std::vector<double> sds)
    : weights_(std::move(weights)), means_(std::move(means)), sds_(std::move(sds)) {
    if (weights_.empty() || weights_.size() != means_.size() || means_.size() != sds_.size()) {
        throw DomainError("NormalMixtureMarginal: weights, means and sds must share a nonzero length");
    }
    double total = 0.0;
    for (std::size_t r = 0; r < weights_.size(); ++r) {
        if (!(weights_[r] > 0.0) || !std::isfinite(means_[r]) || !(sds_[r] > 0.0)) {
            throw DomainError("NormalMixtureMarginal: need positive weights and sds, finite means");
        }
        total += weights_[r];
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw DomainError("NormalMixtureMarginal: weights must sum to 1");
    }
    lo_ = means_[0] - 40.0 * sds_[0];
    hi_ = means_[0] + 40.0 * sds_[0];
    for (std::size_t r = 1; r < weights_.size(); ++r) {
        lo_ = std::min(lo_, means_[r] - 40.0 * sds_[r]);
        hi_ = std::max(hi_, means_[r] + 40.0 * sds_[r]);
    }
}

double NormalMixtureMarginal::cdf(double x) const {
    double acc = 0.0;
    for (std::size_t r = 0; r < weights_.size(); ++r) {
        acc += weights_[r] * normal::cdf((x - means_[r]) / sds_[r]);
    }
    return acc;
}

double NormalMixtureMarginal::quantile(double u) const {
    require_unit(u, "NormalMixtureMarginal::quantile");
    return bisect_increasing([this](double x) { return cdf(x); }, u, lo_, hi_, 1e-12);
}

double NormalMixtureMarginal::pdf(double x) const { return std::exp(log_pdf(x)); }

double NormalMixtureMarginal::log_pdf(double x) const {
    std::vector<double> terms(weights_.size());
    for (std::size_t r = 0; r < weights_.size(); ++r) {
        terms[r] = std::log(weights_[r]) + normal::log_pdf((x - means_[r]) / sds_[r]) -
                   std::log(sds_[r]);
    }
    return log_sum_exp(terms);
}

std::string NormalMixtureMarginal::id() const { return "normal-mixture"; }

// ---------------------------------------------------------------------------

EmpiricalCdf::EmpiricalCdf(std::span<const double> sample) : n_(sample.size()) {
    if (n_ < 2) throw DomainError("EmpiricalCdf: need at least two observations");
    std::vector<double> sorted(sample.begin(), sample.end());
    for (double x : sorted) {
        if (!std::isfinite(x)) throw DomainError("EmpiricalCdf: non-finite observation");
    }
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) throw DomainError("EmpiricalCdf: constant sample");

    const double denom = static_cast<double>(n_) + 1.0;
    std::size_t i = 0;
    while (i < n_) {
        std::size_t j = i;
        while (j + 1 < n_ && sorted[j + 1] == sorted[i]) ++j;
        // ranks i+1 .. j+1 share one value
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        knots_.push_back(sorted[i]);
        levels_.push_back(avg_rank / denom);
        i = j + 1;
    }
}

double EmpiricalCdf::cdf(double x) const {
    if (std::isnan(x)) throw DomainError("EmpiricalCdf::cdf: NaN argument");
    if (x <= knots_.front()) return levels_.front();
    if (x >= knots_.back()) return levels_.back();
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
    const double t = (x - knots_[k - 1]) / (knots_[k] - knots_[k - 1]);
    return levels_[k - 1] + t * (levels_[k] - levels_[k - 1]);
}

double EmpiricalCdf::quantile(double u) const {
    require_unit(u, "EmpiricalCdf::quantile");
    if (u <= levels_.front()) return knots_.front();
    if (u >= levels_.back()) return knots_.back();
    const auto it = std::upper_bound(levels_.begin(), levels_.end(), u);
    const std::size_t k = static_cast<std::size_t>(it - levels_.begin());
    const double t = (u - levels_[k - 1]) / (levels_[k] - levels_[k - 1]);
    return knots_[k - 1] + t * (knots_[k] - knots_[k - 1]);
}

double EmpiricalCdf::pdf(double x) const {
    if (x < knots_.front() || x >= knots_.back()) return 0.0;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
    return (levels_[k] - levels_[k - 1]) / (knots_[k] - knots_[k - 1]);
}

std::string EmpiricalCdf::id() const { return "empirical"; }

// ---------------------------------------------------------------------------

MarginalTransform::MarginalTransform(std::vector<std::shared_ptr<const Marginal>> margins)
    : margins_(std::move(margins)) {
    if (margins_.empty()) throw DomainError("MarginalTransform: dimension must be at least 1");
    for (const auto& m : margins_) {
        if (!m) throw DomainError("MarginalTransform: null margin");
    }
}

MarginalTransform MarginalTransform::standard_normal(std::size_t dim) {
    auto m = std::make_shared<const NormalMarginal>();
    return MarginalTransform(std::vector<std::shared_ptr<const Marginal>>(dim, m));
}

MarginalTransform MarginalTransform::logistic(std::size_t dim) {
    auto m = std::make_shared<const LogisticMarginal>();
    return MarginalTransform(std::vector<std::shared_ptr<const Marginal>>(dim, m));
}

MarginalTransform MarginalTransform::named(const std::string& id, std::size_t dim) {
    if (id == "normal") return standard_normal(dim);
    if (id == "logistic") return logistic(dim);
    throw DomainError("unknown transform '" + id + "' (expected normal or logistic)");
}

std::string MarginalTransform::id() const {
    const std::string first = margins_.front()->id();
    for (const auto& m : margins_) {
        if (m->id() != first) return "mixed";
    }
    return first;
}

UnitPoint MarginalTransform::forward(std::span<const double> x) const {
    if (x.size() != dim()) throw DomainError("forward_transform: dimension mismatch");
    std::vector<double> u(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        if (!std::isfinite(x[i])) throw DomainError("forward_transform: non-finite input");
        u[i] = margins_[i]->cdf(x[i]);
    }
    return UnitPoint(std::move(u));
}

std::vector<double> MarginalTransform::inverse(const UnitPoint& u) const {
    if (u.dim() != dim()) throw DomainError("inverse_transform: dimension mismatch");
    std::vector<double> x(dim());
    for (std::size_t i = 0; i < dim(); ++i) x[i] = margins_[i]->quantile(u[i]);
    return x;
}

double MarginalTransform::log_jacobian(std::span<const double> x) const {
    if (x.size() != dim()) throw DomainError("log_jacobian: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) acc += margins_[i]->log_pdf(x[i]);
    return acc;
}

} // namespace copmix
