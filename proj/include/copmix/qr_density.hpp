#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "copmix/gmm.hpp"
#include "copmix/marginal.hpp"
#include "copmix/unit_point.hpp"

namespace copmix {

// Copula-density approximation built from a latent Gaussian mixture f and a
// marginal transform H:
//   q(u) = f(H^{-1}(u)) / prod_i h_i(H_i^{-1}(u_i)).
// With H equal to the mixture's own marginals q is exactly the copula
// density of f; with any other H it is a density on the cube whose margins
// are only approximately uniform.
class QRDensity {
public:
    QRDensity(GaussianMixtureModel gmm, MarginalTransform transform);

    // Transform made of the mixture's own univariate marginals.
    static QRDensity copula_of(const GaussianMixtureModel& gmm);

    const GaussianMixtureModel& gmm() const { return gmm_; }
    const MarginalTransform& transform() const { return transform_; }
    std::size_t dim() const { return gmm_.dim(); }

    double log_density(const UnitPoint& u) const;
    double density(const UnitPoint& u) const;

    // i-th marginal density of q:
    //   sum_r pi_r N(H_i^{-1}(u); mu_{r,i}, Sigma_r(i,i)) / h_i(H_i^{-1}(u)).
    double marginal_density(std::size_t i, double u) const;

    // Draws from q: latent mixture draws pushed through H.
    std::vector<UnitPoint> sample(std::size_t n, std::uint64_t seed) const;

private:
    GaussianMixtureModel gmm_;
    MarginalTransform transform_;
};

} // namespace copmix
