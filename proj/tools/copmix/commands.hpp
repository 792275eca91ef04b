#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "copmix/diagnostics.hpp"
#include "copmix/mixture_fit.hpp"
#include "copmix/model_io.hpp"
#include "copmix/qr_density.hpp"
#include "json.hpp"
#include "spec_file.hpp"

namespace copmix::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

// Failure inside one stage of the experiment pipeline; keeps the original
// exit code and names the stage.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, int exit_code, const std::string& message)
        : std::runtime_error(message), stage_(std::move(stage)), exit_code_(exit_code) {}
    const std::string& stage() const { return stage_; }
    int exit_code() const { return exit_code_; }

private:
    std::string stage_;
    int exit_code_;
};

// Draws n points from the copula. The example copula uses conditional
// inversion, Archimedean families the latent-variable construction and the
// Gaussian copula its Cholesky factor.
std::vector<UnitPoint> sample_copula(const CopulaSpec& c, std::size_t n, std::uint64_t seed);

// Density of the copula. Throws DomainError when no evaluator is available:
// non-Clayton Archimedean families above two dimensions need
// finite_difference enabled.
DensityFn copula_density(const CopulaSpec& c, bool finite_difference);

// Copula draws mapped through the margin quantile when a margin is given.
Eigen::MatrixXd generate_data(const ExperimentSpec& spec);

struct FitOutcome {
    FitReport report;
    StoredModel model;
};

// pseudo-observations, latent embedding, BIC selection.
FitOutcome fit_data(const Eigen::MatrixXd& data, const FitConfig& config, const std::string& transform);

nlohmann::json fit_report_json(const FitReport& report, std::size_t dim, const FitConfig& config,
                               const std::string& transform);

// Rows (u_1, ..., u_M, q(u)) over the midpoint grid or the given points.
Eigen::MatrixXd density_grid(const QRDensity& q, std::size_t grid_per_dim);
Eigen::MatrixXd density_points(const QRDensity& q, const Eigen::MatrixXd& points);

// Gaps, marginal KS from ks_samples draws and, with a reference, L1 and Linf
// distances to the reference density.
nlohmann::json diagnose_density(const DensityFn& f, std::size_t dim,
                                const std::vector<std::vector<double>>& margin_samples,
                                const std::optional<DensityFn>& reference, const DiagnosticsSpec& d,
                                std::uint64_t seed);
nlohmann::json diagnose_model(const QRDensity& q, const std::optional<CopulaSpec>& reference,
                              const DiagnosticsSpec& d, std::size_t ks_samples, std::uint64_t seed);
nlohmann::json diagnose_copula(const CopulaSpec& c, const DiagnosticsSpec& d, std::uint64_t seed);

// Per-R table: criterion values plus both parameter-count conventions.
std::string summary_csv(const FitReport& report, std::size_t dim);

// Full command-line entry point. Errors go to err as one JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace copmix::cli
