#include "copmix/gmm.hpp"

#include <cmath>

#include "copmix/errors.hpp"
#include "copmix/normal_dist.hpp"
#include "copmix/numeric.hpp"

namespace copmix {

std::string to_string(CovarianceMode mode) {
    return mode == CovarianceMode::Spherical ? "spherical" : "full";
}

CovarianceMode covariance_mode_from_string(const std::string& s) {
    if (s == "spherical") return CovarianceMode::Spherical;
    if (s == "full") return CovarianceMode::Full;
    throw DomainError("unknown covariance mode '" + s + "' (expected spherical or full)");
}

GaussianMixtureModel::GaussianMixtureModel(std::vector<double> weights,
                                           std::vector<Eigen::VectorXd> means,
                                           std::vector<Eigen::MatrixXd> covariances,
                                           CovarianceMode mode)
    : weights_(std::move(weights)), means_(std::move(means)), covariances_(std::move(covariances)),
      mode_(mode) {
    const std::size_t r_count = weights_.size();
    if (r_count == 0 || means_.size() != r_count || covariances_.size() != r_count) {
        throw DomainError("GaussianMixtureModel: weights, means and covariances must share a nonzero length");
    }
    const Eigen::Index m = means_.front().size();
    if (m == 0) throw DomainError("GaussianMixtureModel: dimension must be at least 1");

    double total = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0)) throw DomainError("GaussianMixtureModel: weights must be positive");
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw DomainError("GaussianMixtureModel: weights must sum to 1");

    for (std::size_t r = 0; r < r_count; ++r) {
        const auto& mu = means_[r];
        const auto& cov = covariances_[r];
        if (mu.size() != m || cov.rows() != m || cov.cols() != m) {
            throw DomainError("GaussianMixtureModel: component " + std::to_string(r) + " has wrong dimension");
        }
        if (!mu.allFinite() || !cov.allFinite()) {
            throw DomainError("GaussianMixtureModel: non-finite parameter");
        }
        if (mode_ == CovarianceMode::Spherical) {
            const double s2 = cov(0, 0);
            const Eigen::MatrixXd expected = s2 * Eigen::MatrixXd::Identity(m, m);
            if (!(s2 > 0.0) || cov != expected) {
                throw DomainError("GaussianMixtureModel: spherical covariance must be sigma^2 I with sigma > 0");
            }
        } else if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + cov.cwiseAbs().maxCoeff())) {
            throw DomainError("GaussianMixtureModel: covariance must be symmetric");
        }
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success) {
            throw DomainError("GaussianMixtureModel: covariance " + std::to_string(r) + " is not positive definite");
        }
        Eigen::MatrixXd l = llt.matrixL();
        const double log_det = 2.0 * l.diagonal().array().log().sum();
        log_norm_.push_back(-static_cast<double>(m) * normal::kLogSqrt2Pi - 0.5 * log_det);
        chol_lower_.push_back(std::move(l));
    }
}

GaussianMixtureModel GaussianMixtureModel::spherical(std::vector<double> weights,
                                                     std::vector<Eigen::VectorXd> means,
                                                     std::span<const double> sigmas) {
    if (sigmas.size() != means.size()) throw DomainError("spherical: one sigma per component required");
    std::vector<Eigen::MatrixXd> covs;
    for (std::size_t r = 0; r < means.size(); ++r) {
        const Eigen::Index m = means[r].size();
        covs.push_back(sigmas[r] * sigmas[r] * Eigen::MatrixXd::Identity(m, m));
    }
    return GaussianMixtureModel(std::move(weights), std::move(means), std::move(covs),
                                CovarianceMode::Spherical);
}

void GaussianMixtureModel::weighted_component_log_densities(std::span<const double> x,
                                                             std::span<double> out) const {
    if (x.size() != dim()) throw DomainError("GaussianMixtureModel: dimension mismatch");
    if (out.size() != components()) throw DomainError("GaussianMixtureModel: output size mismatch");
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    for (std::size_t r = 0; r < components(); ++r) {
        const Eigen::VectorXd w = chol_lower_[r].triangularView<Eigen::Lower>().solve(xv - means_[r]);
        out[r] = std::log(weights_[r]) + log_norm_[r] - 0.5 * w.squaredNorm();
    }
}

double GaussianMixtureModel::log_density(std::span<const double> x) const {
    std::vector<double> terms(components());
    weighted_component_log_densities(x, terms);
    return log_sum_exp(terms);
}

double GaussianMixtureModel::density(std::span<const double> x) const {
    return std::exp(log_density(x));
}

double GaussianMixtureModel::marginal_log_density(std::size_t i, double x) const {
    if (i >= dim()) throw DomainError("marginal_log_density: index out of range");
    const auto k = static_cast<Eigen::Index>(i);
    std::vector<double> terms(components());
    for (std::size_t r = 0; r < components(); ++r) {
        const double sd = std::sqrt(covariances_[r](k, k));
        terms[r] = std::log(weights_[r]) + normal::log_pdf((x - means_[r][k]) / sd) - std::log(sd);
    }
    return log_sum_exp(terms);
}

Eigen::MatrixXd GaussianMixtureModel::sample(std::size_t n, Rng& rng) const {
    const auto m = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), m);
    Eigen::VectorXd eps(m);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        std::size_t r = 0;
        double cum = weights_[0];
        while (u > cum && r + 1 < components()) cum += weights_[++r];
        for (Eigen::Index k = 0; k < m; ++k) eps[k] = rng.normal();
        out.row(static_cast<Eigen::Index>(i)) =
            (means_[r] + chol_lower_[r].triangularView<Eigen::Lower>() * eps).transpose();
    }
    return out;
}

std::size_t GaussianMixtureModel::free_parameter_count() const {
    const std::size_t r = components();
    const std::size_t m = dim();
    const std::size_t per_cov = mode_ == CovarianceMode::Spherical ? 1 : m * (m + 1) / 2;
    return (r - 1) + r * m + r * per_cov;
}

} // namespace copmix
