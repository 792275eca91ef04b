#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "copmix/unit_point.hpp"

namespace copmix {

// A univariate distribution on the real line exposing H, H^{-1} and h.
// Implementations are immutable.
class Marginal {
public:
    virtual ~Marginal() = default;

    virtual double cdf(double x) const = 0;
    virtual double quantile(double u) const = 0;
    virtual double pdf(double x) const = 0;
    virtual double log_pdf(double x) const;

    // Short identifier used in model files ("normal", "logistic", ...).
    virtual std::string id() const = 0;
};

class NormalMarginal final : public Marginal {
public:
    NormalMarginal(double mean = 0.0, double sd = 1.0);
    double cdf(double x) const override;
    double quantile(double u) const override;
    double pdf(double x) const override;
    double log_pdf(double x) const override;
    std::string id() const override;

    double mean() const { return mean_; }
    double sd() const { return sd_; }

private:
    double mean_;
    double sd_;
};

class LogisticMarginal final : public Marginal {
public:
    LogisticMarginal(double location = 0.0, double scale = 1.0);
    double cdf(double x) const override;
    double quantile(double u) const override;
    double pdf(double x) const override;
    double log_pdf(double x) const override;
    std::string id() const override;

private:
    double location_;
    double scale_;
};

// Finite mixture of univariate normals. No closed-form quantile: the inverse
// is found by bracketed bisection to 1e-12 absolute tolerance.
class NormalMixtureMarginal final : public Marginal {
public:
    NormalMixtureMarginal(std::vector<double> weights, std::vector<double> means,
                          std::vector<double> sds);
    double cdf(double x) const override;
    double quantile(double u) const override;
    double pdf(double x) const override;
    double log_pdf(double x) const override;
    std::string id() const override;

    std::span<const double> weights() const { return weights_; }
    std::span<const double> means() const { return means_; }
    std::span<const double> sds() const { return sds_; }

private:
    std::vector<double> weights_;
    std::vector<double> means_;
    std::vector<double> sds_;
    double lo_;
    double hi_;
};

// Rank-based empirical CDF rescaled to rank/(n+1): the k-th order statistic
// maps to k/(n+1) (average rank under ties), values in between are linearly
// interpolated and queries outside the sample range are clamped to the
// extreme ranks. Never returns 0 or 1. The density is the slope of the
// interpolant and vanishes outside the sample range.
class EmpiricalCdf final : public Marginal {
public:
    explicit EmpiricalCdf(std::span<const double> sample);
    double cdf(double x) const override;
    double quantile(double u) const override;
    double pdf(double x) const override;
    std::string id() const override;

    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::vector<double> knots_;  // distinct sorted sample values
    std::vector<double> levels_; // average rank / (n+1) at each knot
};

// The coordinate-wise map x -> (H_1(x_1), ..., H_M(x_M)) and its inverse.
class MarginalTransform {
public:
    explicit MarginalTransform(std::vector<std::shared_ptr<const Marginal>> margins);

    static MarginalTransform standard_normal(std::size_t dim);
    static MarginalTransform logistic(std::size_t dim);
    // "normal" or "logistic".
    static MarginalTransform named(const std::string& id, std::size_t dim);

    std::size_t dim() const { return margins_.size(); }
    const Marginal& margin(std::size_t i) const { return *margins_.at(i); }

    // Identifier of the transform when every margin shares one id, "mixed"
    // otherwise.
    std::string id() const;

    UnitPoint forward(std::span<const double> x) const;
    std::vector<double> inverse(const UnitPoint& u) const;

    // sum_i log h_i(x_i)
    double log_jacobian(std::span<const double> x) const;

private:
    std::vector<std::shared_ptr<const Marginal>> margins_;
};

} // namespace copmix
