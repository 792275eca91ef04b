#pragma once

#include <cstdint>
#include <random>

namespace copmix {

// Seeded pseudo-random source. Variate transforms are written out here rather
// than taken from <random> distributions so that streams are identical across
// standard library implementations. One instance per thread.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on the open interval (0,1), 53-bit resolution.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Unit-mean exponential by inversion.
    double exponential();

    // Standard normal by inversion of the normal CDF.
    double normal();

    // Gamma(shape, 1), Marsaglia-Tsang squeeze; shape < 1 uses the
    // U^{1/shape} boost.
    double gamma(double shape);

    std::uint64_t next_u64() { return engine_(); }

    // Independent child seed, used to give restarts and sub-samplers their
    // own streams.
    std::uint64_t split() { return engine_() ^ 0x9e3779b97f4a7c15ULL; }

private:
    std::mt19937_64 engine_;
};

} // namespace copmix
