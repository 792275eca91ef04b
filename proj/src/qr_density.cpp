#include "copmix/qr_density.hpp"

#include <cmath>
#include <memory>

#include "copmix/errors.hpp"
#include "copmix/rng.hpp"

namespace copmix {

QRDensity::QRDensity(GaussianMixtureModel gmm, MarginalTransform transform)
    : gmm_(std::move(gmm)), transform_(std::move(transform)) {
    if (gmm_.dim() != transform_.dim()) {
        throw DomainError("QRDensity: mixture dimension " + std::to_string(gmm_.dim()) +
                          " does not match transform dimension " + std::to_string(transform_.dim()));
    }
}

QRDensity QRDensity::copula_of(const GaussianMixtureModel& gmm) {
    std::vector<std::shared_ptr<const Marginal>> margins;
    const std::size_t r_count = gmm.components();
    for (std::size_t i = 0; i < gmm.dim(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        std::vector<double> means(r_count);
        std::vector<double> sds(r_count);
        for (std::size_t r = 0; r < r_count; ++r) {
            means[r] = gmm.means()[r][k];
            sds[r] = std::sqrt(gmm.covariances()[r](k, k));
        }
        margins.push_back(std::make_shared<NormalMixtureMarginal>(gmm.weights(), means, sds));
    }
    return QRDensity(gmm, MarginalTransform(std::move(margins)));
}

double QRDensity::log_density(const UnitPoint& u) const {
    if (u.dim() != dim()) throw DomainError("qr_density: point dimension does not match model");
    const std::vector<double> z = transform_.inverse(u);
    return gmm_.log_density(z) - transform_.log_jacobian(z);
}

double QRDensity::density(const UnitPoint& u) const { return std::exp(log_density(u)); }

double QRDensity::marginal_density(std::size_t i, double u) const {
    if (i >= dim()) throw DomainError("qr_marginal_density: index out of range");
    if (!(u > 0.0 && u < 1.0)) throw DomainError("qr_marginal_density: u must lie in (0,1)");
    const Marginal& h = transform_.margin(i);
    const double z = h.quantile(u);
    return std::exp(gmm_.marginal_log_density(i, z) - h.log_pdf(z));
}

std::vector<UnitPoint> QRDensity::sample(std::size_t n, std::uint64_t seed) const {
    if (n == 0) throw DomainError("QRDensity::sample: n must be at least 1");
    Rng rng(seed);
    const Eigen::MatrixXd z = gmm_.sample(n, rng);
    std::vector<UnitPoint> out;
    out.reserve(n);
    std::vector<double> row(dim());
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        for (std::size_t k = 0; k < dim(); ++k) {
            row[k] = open_unit(transform_.margin(k).cdf(z(i, static_cast<Eigen::Index>(k))));
        }
        out.emplace_back(row);
    }
    return out;
}

} // namespace copmix
