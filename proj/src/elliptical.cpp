#include "copmix/elliptical.hpp"

#include <cmath>
#include <string>

#include "copmix/errors.hpp"
#include "copmix/normal_dist.hpp"
#include "copmix/numeric.hpp"
#include "copmix/rng.hpp"

namespace copmix {

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd r) : r_(std::move(r)) {
    if (r_.rows() == 0 || r_.rows() != r_.cols()) {
        throw DomainError("CorrelationMatrix: matrix must be square and nonempty");
    }
    if (!r_.allFinite()) throw DomainError("CorrelationMatrix: non-finite entry");
    const Eigen::Index m = r_.rows();
    for (Eigen::Index i = 0; i < m; ++i) {
        if (r_(i, i) != 1.0) throw DomainError("CorrelationMatrix: diagonal must be exactly 1");
        for (Eigen::Index j = i + 1; j < m; ++j) {
            if (std::fabs(r_(i, j) - r_(j, i)) > 1e-12) {
                throw DomainError("CorrelationMatrix: matrix is not symmetric");
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r_, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 1e-10)) {
        throw DomainError("CorrelationMatrix: matrix is not positive definite");
    }
}

CorrelationMatrix CorrelationMatrix::bivariate(double rho) {
    Eigen::MatrixXd r(2, 2);
    r << 1.0, rho, rho, 1.0;
    return CorrelationMatrix(std::move(r));
}

CorrelationMatrix CorrelationMatrix::from_covariance(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols()) throw DomainError("from_covariance: matrix must be square");
    const Eigen::VectorXd sd = sigma.diagonal().cwiseSqrt();
    if (!(sd.minCoeff() > 0.0)) throw DomainError("from_covariance: variances must be positive");
    Eigen::MatrixXd r = sd.cwiseInverse().asDiagonal() * sigma * sd.cwiseInverse().asDiagonal();
    r = 0.5 * (r + r.transpose()).eval();
    r.diagonal().setOnes();
    return CorrelationMatrix(std::move(r));
}

CorrelationMatrix CorrelationMatrix::nearest(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw DomainError("nearest: matrix must be square");
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(1e-8);
    Eigen::MatrixXd p = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    const Eigen::VectorXd inv_sd = p.diagonal().cwiseSqrt().cwiseInverse();
    p = inv_sd.asDiagonal() * p * inv_sd.asDiagonal();
    p = 0.5 * (p + p.transpose()).eval();
    p.diagonal().setOnes();
    return CorrelationMatrix(std::move(p));
}

// ---------------------------------------------------------------------------

GaussianCopula::GaussianCopula(CorrelationMatrix corr) : corr_(std::move(corr)) {
    Eigen::LLT<Eigen::MatrixXd> llt(corr_.matrix());
    if (llt.info() != Eigen::Success) throw NumericalError("GaussianCopula: Cholesky factorization failed");
    chol_lower_ = llt.matrixL();
    log_det_ = 2.0 * chol_lower_.diagonal().array().log().sum();
}

double GaussianCopula::log_density(const UnitPoint& u) const {
    if (u.dim() != dim()) throw DomainError("GaussianCopula: dimension mismatch");
    Eigen::VectorXd z(static_cast<Eigen::Index>(dim()));
    for (std::size_t i = 0; i < dim(); ++i) z[static_cast<Eigen::Index>(i)] = normal::quantile(u[i]);
    const Eigen::VectorXd w = chol_lower_.triangularView<Eigen::Lower>().solve(z);
    return -0.5 * log_det_ - 0.5 * (w.squaredNorm() - z.squaredNorm());
}

double GaussianCopula::density(const UnitPoint& u) const { return std::exp(log_density(u)); }

std::vector<UnitPoint> GaussianCopula::sample(std::size_t n, std::uint64_t seed) const {
    if (n == 0) throw DomainError("sample_gaussian_copula: n must be at least 1");
    Rng rng(seed);
    const auto m = static_cast<Eigen::Index>(dim());
    std::vector<UnitPoint> out;
    out.reserve(n);
    Eigen::VectorXd eps(m);
    std::vector<double> row(dim());
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < m; ++k) eps[k] = rng.normal();
        const Eigen::VectorXd z = chol_lower_.triangularView<Eigen::Lower>() * eps;
        for (Eigen::Index k = 0; k < m; ++k) row[static_cast<std::size_t>(k)] = open_unit(normal::cdf(z[k]));
        out.emplace_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------

GaussianCopulaMixture::GaussianCopulaMixture(std::vector<double> weights,
                                             std::vector<GaussianCopula> components)
    : weights_(std::move(weights)), components_(std::move(components)) {
    if (components_.empty() || weights_.size() != components_.size()) {
        throw DomainError("GaussianCopulaMixture: need one positive weight per component");
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0)) throw DomainError("GaussianCopulaMixture: weights must be positive");
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw DomainError("GaussianCopulaMixture: weights must sum to 1");
    for (const auto& c : components_) {
        if (c.dim() != components_.front().dim()) {
            throw DomainError("GaussianCopulaMixture: components differ in dimension");
        }
    }
}

double GaussianCopulaMixture::density(const UnitPoint& u) const {
    std::vector<double> terms(components_.size());
    for (std::size_t r = 0; r < components_.size(); ++r) {
        terms[r] = std::log(weights_[r]) + components_[r].log_density(u);
    }
    return std::exp(log_sum_exp(terms));
}

} // namespace copmix
