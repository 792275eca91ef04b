#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "copmix/gmm.hpp"
#include "copmix/qr_density.hpp"

namespace copmix {

inline constexpr const char* kModelFormat = "copmix-model";
inline constexpr int kModelVersion = 1;

// Provenance of a fitted model. All fields optional so hand-written models
// stay valid.
struct FitMetadata {
    std::optional<std::size_t> n;
    std::optional<std::uint64_t> seed;
    std::optional<double> loglik;
    std::optional<double> bic;
    std::optional<int> iterations;
    std::optional<bool> converged;
};

struct StoredModel {
    GaussianMixtureModel gmm;
    std::string transform; // "normal" or "logistic"
    FitMetadata fit;

    QRDensity density() const;
};

// Versioned JSON document. Doubles are written in shortest round-trip form,
// so reading back reproduces every stored float bit for bit.
std::string model_to_json(const StoredModel& model);

// Throws DomainError on a malformed document, unknown format or version,
// unknown key, or parameters that fail GaussianMixtureModel validation.
StoredModel model_from_json(const std::string& text);

} // namespace copmix
