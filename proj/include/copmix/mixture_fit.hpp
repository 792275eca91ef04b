#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "copmix/gmm.hpp"
#include "copmix/marginal.hpp"

namespace copmix {

struct FitConfig {
    std::vector<std::size_t> candidates{2, 3, 4, 5};
    int max_iterations = 500;
    double tolerance = 1e-8;       // relative log-likelihood change
    CovarianceMode mode = CovarianceMode::Full;
    double covariance_floor = 1e-6; // lower bound on covariance eigenvalues
    int restarts = 5;
    std::uint64_t seed = 1;

    // Throws DomainError for tolerance <= 0, restarts < 1, etc.
    void validate() const;
};

// Average rank / (n+1) of one column; ties share their mean rank. n >= 2,
// throws on a constant column.
std::vector<double> rank_pseudo_observations(std::span<const double> column);

// Column-wise average rank / (n+1). Requires n >= 10 and finite entries;
// throws on a constant column.
Eigen::MatrixXd pseudo_observations(const Eigen::MatrixXd& data);

// Coordinate-wise H_i^{-1} of pseudo-observations.
Eigen::MatrixXd latent_embed(const Eigen::MatrixXd& u, const MarginalTransform& t);

struct EmResult {
    GaussianMixtureModel model;
    double loglik = 0.0;
    std::vector<double> loglik_trace; // one entry per E-step of the winning restart
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> warnings; // degenerate restarts
};

// EM for a Gaussian mixture with R components on the rows of z. k-means++
// seeding, best of config.restarts by final log-likelihood. Deterministic in
// (z, config, R). Restarts whose components collapse (weight < 1e-8, or the
// covariance floor active for 20 consecutive iterations or at termination)
// are discarded and
// listed in warnings; if every restart collapses a NumericalError is thrown.
EmResult em_fit(const Eigen::MatrixXd& z, const FitConfig& config, std::size_t components);

// -2 loglik + k ln n; lower is better.
double bic(double loglik, std::size_t k, double n);

// Parameter counts used when comparing the two mixture families:
//   MixtureI  (mixture of Gaussian copulas)      R M(M-1)/2 + R - 1
//   MixtureII (latent normal mixture, q_R model) R M(M+3)/2 + R - 1 - 2M
// The -2M reflects the M means and M variances a copula fit cannot determine.
enum class MixtureKind { MixtureI, MixtureII };

std::size_t param_count(MixtureKind kind, std::size_t dim, std::size_t components);

struct FitRecord {
    std::size_t components = 0;
    double loglik = 0.0;
    std::size_t parameters = 0;
    double bic = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string note; // failure reason or degeneracy warnings
};

struct FitReport {
    std::vector<FitRecord> records; // ordered by candidate R
    std::size_t selected = 0;       // R of the min-BIC converged record
    std::size_t n = 0;
    std::vector<std::optional<GaussianMixtureModel>> models; // parallel to records

    const GaussianMixtureModel& selected_model() const;
};

// Fits every candidate R and selects the converged fit with the smallest BIC.
// Throws NumericalError when no candidate converged.
FitReport select_model(const Eigen::MatrixXd& z, const FitConfig& config);

} // namespace copmix
