#pragma once

#include <cstddef>
#include <span>

#include "copmix/rng.hpp"
#include "copmix/unit_point.hpp"

namespace copmix {

// Bivariate non-exchangeable copula
//   C(u,v) = u^{1-alpha} v^{1-beta} [u^{-theta alpha} + v^{-theta beta} - 1]^{-1/theta}
// with alpha, beta in (0,1) and theta > 0. Exchangeable only when
// alpha == beta; never radially symmetric for the parameters used here.
class ExampleCopula {
public:
    ExampleCopula(double alpha, double beta, double theta);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double theta() const { return theta_; }

    // Accepts the closed square so the boundary identities can be checked;
    // C(u,0) = C(0,v) = 0.
    double cdf(double u, double v) const;

    // Closed-form mixed partial; (u,v) must lie in the open square.
    double density(double u, double v) const;
    double density(const UnitPoint& u) const;

    // C(u|v) = dC/dv, a distribution function in u for fixed v.
    double conditional_cdf(double u, double v) const;

    // Inverse of u -> C(u|v) by bisection on [1e-12, 1-1e-12], tolerance 1e-12.
    double conditional_quantile(double w, double v) const;

    // One draw (u, v) by conditional inversion: v uniform, then u = C^{-1}(w|v).
    std::pair<double, double> sample(Rng& rng) const;

private:
    double log_s(double log_u, double log_v) const;

    double alpha_;
    double beta_;
    double theta_;
};

// Clayton copula in dimension M >= 2, theta > 0:
//   C(u) = (sum_m u_m^{-theta} - M + 1)^{-1/theta}.
class ClaytonCopula {
public:
    ClaytonCopula(double theta, std::size_t dim);

    double theta() const { return theta_; }
    std::size_t dim() const { return dim_; }

    // Closed cube accepted; any zero coordinate gives 0.
    double cdf(std::span<const double> u) const;
    double cdf(const UnitPoint& u) const { return cdf(u.coords()); }

    // prod_{k<M}(1 + k theta) prod_m u_m^{-theta-1} S^{-1/theta - M}
    double density(const UnitPoint& u) const;

private:
    double theta_;
    std::size_t dim_;
};

} // namespace copmix
