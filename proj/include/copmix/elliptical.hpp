#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "copmix/unit_point.hpp"

namespace copmix {

// Symmetric, unit-diagonal, positive definite (smallest eigenvalue > 1e-10).
class CorrelationMatrix {
public:
    explicit CorrelationMatrix(Eigen::MatrixXd r);

    // 2x2 matrix with off-diagonal rho.
    static CorrelationMatrix bivariate(double rho);

    // R = S^{-1} Sigma S^{-1} with S = diag(sqrt(diag Sigma)).
    static CorrelationMatrix from_covariance(const Eigen::MatrixXd& sigma);

    // Nearest valid correlation matrix: symmetrize, clip eigenvalues at 1e-8,
    // then rescale to unit diagonal.
    static CorrelationMatrix nearest(const Eigen::MatrixXd& m);

    std::size_t dim() const { return static_cast<std::size_t>(r_.rows()); }
    const Eigen::MatrixXd& matrix() const { return r_; }

private:
    Eigen::MatrixXd r_;
};

class GaussianCopula {
public:
    explicit GaussianCopula(CorrelationMatrix corr);

    std::size_t dim() const { return corr_.dim(); }
    const CorrelationMatrix& correlation() const { return corr_; }

    // |R|^{-1/2} exp(-1/2 z'(R^{-1} - I) z), z_i = Phi^{-1}(u_i).
    double density(const UnitPoint& u) const;
    double log_density(const UnitPoint& u) const;

    // z ~ N(0, R) through the Cholesky factor, mapped by Phi coordinate-wise.
    std::vector<UnitPoint> sample(std::size_t n, std::uint64_t seed) const;

private:
    CorrelationMatrix corr_;
    Eigen::MatrixXd chol_lower_;
    double log_det_ = 0.0;
};

// sum_r pi_r c(., R_r). Radially symmetric because every component is.
class GaussianCopulaMixture {
public:
    GaussianCopulaMixture(std::vector<double> weights, std::vector<GaussianCopula> components);

    std::size_t size() const { return components_.size(); }
    std::size_t dim() const { return components_.front().dim(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<GaussianCopula>& components() const { return components_; }

    double density(const UnitPoint& u) const;

private:
    std::vector<double> weights_;
    std::vector<GaussianCopula> components_;
};

} // namespace copmix
