#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "copmix/rng.hpp"

namespace copmix {

enum class CovarianceMode { Spherical, Full };

std::string to_string(CovarianceMode mode);
CovarianceMode covariance_mode_from_string(const std::string& s);

// Finite mixture of multivariate normals on R^M: weights on the simplex,
// means mu_r, covariances Sigma_r (sigma_r^2 I in spherical mode).
class GaussianMixtureModel {
public:
    GaussianMixtureModel(std::vector<double> weights, std::vector<Eigen::VectorXd> means,
                         std::vector<Eigen::MatrixXd> covariances, CovarianceMode mode);

    // Spherical convenience constructor: Sigma_r = sigmas[r]^2 I.
    static GaussianMixtureModel spherical(std::vector<double> weights,
                                          std::vector<Eigen::VectorXd> means,
                                          std::span<const double> sigmas);

    std::size_t components() const { return weights_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(means_.front().size()); }
    CovarianceMode mode() const { return mode_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<Eigen::VectorXd>& means() const { return means_; }
    const std::vector<Eigen::MatrixXd>& covariances() const { return covariances_; }

    double log_density(std::span<const double> x) const;
    double density(std::span<const double> x) const;

    // log(pi_r) + log phi_r(x) for every r, written into out (size R).
    void weighted_component_log_densities(std::span<const double> x, std::span<double> out) const;

    // Density of coordinate i: sum_r pi_r N(x; mu_{r,i}, Sigma_r(i,i)).
    double marginal_log_density(std::size_t i, double x) const;

    // Rows are draws.
    Eigen::MatrixXd sample(std::size_t n, Rng& rng) const;

    // Free parameters of the fitted latent mixture.
    std::size_t free_parameter_count() const;

private:
    std::vector<double> weights_;
    std::vector<Eigen::VectorXd> means_;
    std::vector<Eigen::MatrixXd> covariances_;
    CovarianceMode mode_;
    std::vector<Eigen::MatrixXd> chol_lower_;
    std::vector<double> log_norm_; // -M/2 log(2 pi) - 1/2 log|Sigma_r|
};

} // namespace copmix
