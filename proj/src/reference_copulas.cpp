#include "copmix/reference_copulas.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "copmix/errors.hpp"
#include "copmix/numeric.hpp"

namespace copmix {

namespace {

void require_closed_unit(double x, const char* who) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(who) + ": argument outside [0,1]");
}

void require_open_unit(double x, const char* who) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError(std::string(who) + ": argument outside (0,1)");
}

} // namespace

ExampleCopula::ExampleCopula(double alpha, double beta, double theta)
    : alpha_(alpha), beta_(beta), theta_(theta) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("ExampleCopula: alpha must lie in (0,1)");
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("ExampleCopula: beta must lie in (0,1)");
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw DomainError("ExampleCopula: theta must be positive and finite");
    }
}

// log(u^{-theta alpha} + v^{-theta beta} - 1), accurate when both terms are near 1.
double ExampleCopula::log_s(double log_u, double log_v) const {
    return std::log1p(std::expm1(-theta_ * alpha_ * log_u) + std::expm1(-theta_ * beta_ * log_v));
}

double ExampleCopula::cdf(double u, double v) const {
    require_closed_unit(u, "ExampleCopula::cdf");
    require_closed_unit(v, "ExampleCopula::cdf");
    if (u == 0.0 || v == 0.0) return 0.0;
    const double lu = std::log(u);
    const double lv = std::log(v);
    return std::exp((1.0 - alpha_) * lu + (1.0 - beta_) * lv - log_s(lu, lv) / theta_);
}

double ExampleCopula::density(double u, double v) const {
    require_open_unit(u, "ExampleCopula::density");
    require_open_unit(v, "ExampleCopula::density");
    const double a = alpha_;
    const double b = beta_;
    const double t = theta_;
    const double lu = std::log(u);
    const double lv = std::log(v);
    const double ls = log_s(lu, lv);

    // d/du d/dv of A(u) B(v) K(S(u,v)); every one of the four product-rule
    // terms is positive, so each is assembled in log space.
    const double t1 = std::log((1 - a) * (1 - b)) - a * lu - b * lv - ls / t;
    const double t2 = std::log((1 - a) * b) - a * lu - (b + t * b) * lv - (1 / t + 1) * ls;
    const double t3 = std::log(a * (1 - b)) - (a + t * a) * lu - b * lv - (1 / t + 1) * ls;
    const double t4 = std::log((1 + t) * a * b) - (a + t * a) * lu - (b + t * b) * lv -
                      (1 / t + 2) * ls;
    return std::exp(t1) + std::exp(t2) + std::exp(t3) + std::exp(t4);
}

double ExampleCopula::density(const UnitPoint& u) const {
    if (u.dim() != 2) throw DomainError("ExampleCopula::density: point must be bivariate");
    return density(u[0], u[1]);
}

double ExampleCopula::conditional_cdf(double u, double v) const {
    require_closed_unit(u, "ExampleCopula::conditional_cdf");
    require_open_unit(v, "ExampleCopula::conditional_cdf");
    if (u == 0.0) return 0.0;
    const double lu = std::log(u);
    const double lv = std::log(v);
    const double ls = log_s(lu, lv);
    const double first = (1.0 - beta_) * std::exp((1.0 - alpha_) * lu - beta_ * lv - ls / theta_);
    const double second = beta_ * std::exp((1.0 - alpha_) * lu - beta_ * (1.0 + theta_) * lv -
                                           (1.0 / theta_ + 1.0) * ls);
    return first + second;
}

double ExampleCopula::conditional_quantile(double w, double v) const {
    require_open_unit(w, "ExampleCopula::conditional_quantile");
    require_open_unit(v, "ExampleCopula::conditional_quantile");
    return bisect_increasing([&](double u) { return conditional_cdf(u, v); }, w, 1e-12,
                             1.0 - 1e-12, 1e-12);
}

std::pair<double, double> ExampleCopula::sample(Rng& rng) const {
    const double v = rng.uniform();
    const double w = rng.uniform();
    return {conditional_quantile(w, v), v};
}

// ---------------------------------------------------------------------------

ClaytonCopula::ClaytonCopula(double theta, std::size_t dim) : theta_(theta), dim_(dim) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("ClaytonCopula: theta must be > 0");
    if (dim < 2) throw DomainError("ClaytonCopula: dimension must be at least 2");
}

double ClaytonCopula::cdf(std::span<const double> u) const {
    if (u.size() != dim_) throw DomainError("ClaytonCopula::cdf: dimension mismatch");
    std::vector<double> terms(dim_);
    for (std::size_t m = 0; m < dim_; ++m) {
        require_closed_unit(u[m], "ClaytonCopula::cdf");
        if (u[m] == 0.0) return 0.0;
        terms[m] = std::expm1(-theta_ * std::log(u[m]));
    }
    // sorted summation keeps the result bit-identical under permutations
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double x : terms) s += x;
    return std::exp(-std::log1p(s) / theta_);
}

double ClaytonCopula::density(const UnitPoint& u) const {
    if (u.dim() != dim_) throw DomainError("ClaytonCopula::density: dimension mismatch");
    std::vector<double> terms(dim_);
    double log_prod = 0.0;
    double log_const = 0.0;
    for (std::size_t m = 0; m < dim_; ++m) {
        const double lu = std::log(u[m]);
        terms[m] = std::expm1(-theta_ * lu);
        log_prod += (-theta_ - 1.0) * lu;
        log_const += std::log1p(static_cast<double>(m) * theta_);
    }
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double x : terms) s += x;
    const double ls = std::log1p(s);
    return std::exp(log_const + log_prod - (1.0 / theta_ + static_cast<double>(dim_)) * ls);
}

} // namespace copmix
