#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "copmix/rng.hpp"
#include "copmix/unit_point.hpp"

namespace copmix {

enum class ArchimedeanFamily { Clayton, AliMikhailHaq, Gumbel, Frank };

std::string to_string(ArchimedeanFamily f);
// Accepts "clayton", "amh", "gumbel", "frank".
ArchimedeanFamily archimedean_family_from_string(const std::string& name);

// Completely monotone generator phi: [0, inf) -> [0, 1] with phi(0) = 1, and
// its inverse on (0, 1]. Parameter ranges: Clayton theta > 0, AMH
// theta in [0, 1), Gumbel theta >= 1, Frank theta > 0. The endpoints AMH 0
// and Gumbel 1 give the independence copula.
class ArchimedeanGenerator {
public:
    ArchimedeanGenerator(ArchimedeanFamily family, double theta);

    ArchimedeanFamily family() const { return family_; }
    double theta() const { return theta_; }

    double phi(double t) const;
    double phi_inverse(double u) const;

private:
    ArchimedeanFamily family_;
    double theta_;
};

// G(u) = phi(sum_m phi^{-1}(u_m)) on the closed cube. The inverse-generator
// terms are summed in sorted order, so the value is bit-identical under any
// permutation of u.
double archimedean_cdf(const ArchimedeanGenerator& g, std::span<const double> u);

// Draws the latent D whose Laplace transform is phi:
//   Clayton  Gamma(1/theta, 1)
//   AMH      Geometric(1 - theta) on {1, 2, ...}
//   Gumbel   positive (1/theta)-stable, Laplace transform exp(-t^{1/theta})
//   Frank    logarithmic series Pr[D = d] = (1 - e^{-theta})^d / (theta d)
// Owns its random state; confine an instance to one thread.
class LatentSampler {
public:
    LatentSampler(ArchimedeanFamily family, double theta, std::uint64_t seed);

    ArchimedeanFamily family() const { return family_; }
    double theta() const { return theta_; }

    double draw();
    std::vector<double> sample(std::size_t n);

    // Shared with kimberling_sample so D and the Z_m come from one stream.
    Rng& rng() { return rng_; }

private:
    double draw_frank();

    ArchimedeanFamily family_;
    double theta_;
    Rng rng_;
    // Frank: cumulative table of the logarithmic-series law, truncated when
    // the remaining tail mass drops below 1e-12. Empty when that would need
    // more than kMaxFrankTable entries; draws then use the geometric-mixture
    // representation instead.
    std::vector<double> frank_cdf_;
    double frank_p_ = 0.0;
    static constexpr std::size_t kMaxFrankTable = std::size_t{1} << 20;
};

// U_m = phi(Z_m / D) with Z_m i.i.d. unit exponentials. Per row the stream
// order is D, then Z_1 .. Z_M. Throws if the sampler family/parameter does not
// match the generator.
std::vector<UnitPoint> kimberling_sample(const ArchimedeanGenerator& g, LatentSampler& s,
                                         std::size_t n, std::size_t dim);

} // namespace copmix
