#include "copmix/mixture_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "copmix/errors.hpp"
#include "copmix/numeric.hpp"
#include "copmix/rng.hpp"

namespace copmix {

void FitConfig::validate() const {
    if (candidates.empty()) throw DomainError("FitConfig: candidate list is empty");
    for (std::size_t r : candidates) {
        if (r < 1) throw DomainError("FitConfig: component counts must be at least 1");
    }
    if (max_iterations < 1) throw DomainError("FitConfig: max_iterations must be at least 1");
    if (!(tolerance > 0.0)) throw DomainError("FitConfig: tolerance must be positive");
    if (!(covariance_floor > 0.0)) throw DomainError("FitConfig: covariance floor must be positive");
    if (restarts < 1) throw DomainError("FitConfig: restarts must be at least 1");
}

std::vector<double> rank_pseudo_observations(std::span<const double> column) {
    const std::size_t n = column.size();
    if (n < 2) throw DomainError("pseudo_observations: need at least two observations");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (double x : column) {
        if (!std::isfinite(x)) throw DomainError("pseudo_observations: non-finite entry");
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
    if (column[order.front()] == column[order.back()]) {
        throw DomainError("pseudo_observations: constant column");
    }
    const double denom = static_cast<double>(n) + 1.0;
    std::vector<double> out(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && column[order[j + 1]] == column[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) out[order[k]] = avg_rank / denom;
        i = j + 1;
    }
    return out;
}

Eigen::MatrixXd pseudo_observations(const Eigen::MatrixXd& data) {
    if (data.rows() < 10) throw DomainError("pseudo_observations: need at least 10 rows");
    if (data.cols() < 1) throw DomainError("pseudo_observations: need at least one column");
    Eigen::MatrixXd out(data.rows(), data.cols());
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        const Eigen::VectorXd col = data.col(j);
        try {
            const auto ranks = rank_pseudo_observations(std::span<const double>(col.data(), col.size()));
            out.col(j) = Eigen::Map<const Eigen::VectorXd>(ranks.data(), col.size());
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (column " + std::to_string(j) + ")");
        }
    }
    return out;
}

Eigen::MatrixXd latent_embed(const Eigen::MatrixXd& u, const MarginalTransform& t) {
    if (static_cast<std::size_t>(u.cols()) != t.dim()) {
        throw DomainError("latent_embed: column count does not match transform dimension");
    }
    Eigen::MatrixXd z(u.rows(), u.cols());
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        const Marginal& h = t.margin(static_cast<std::size_t>(j));
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            const double v = u(i, j);
            if (!(v > 0.0 && v < 1.0)) throw DomainError("latent_embed: value outside (0,1)");
            z(i, j) = h.quantile(v);
            if (!std::isfinite(z(i, j))) throw DomainError("latent_embed: non-finite latent value");
        }
    }
    return z;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kMinWeight = 1e-8;
constexpr int kFloorPatience = 20;

struct RestartOutcome {
    std::optional<GaussianMixtureModel> model;
    double loglik = -std::numeric_limits<double>::infinity();
    std::vector<double> trace;
    int iterations = 0;
    bool converged = false;
    std::string failure;
};

// k-means++ seeding followed by a few Lloyd passes; returns hard labels.
std::vector<std::size_t> initial_labels(const Eigen::MatrixXd& z, std::size_t k, Rng& rng) {
    const Eigen::Index n = z.rows();
    auto pick_index = [&](double u, Eigen::Index limit) {
        return std::min<Eigen::Index>(static_cast<Eigen::Index>(u * static_cast<double>(limit)), limit - 1);
    };
    Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), z.cols());
    centers.row(0) = z.row(pick_index(rng.uniform(), n));
    Eigen::VectorXd d2 = (z.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (std::size_t c = 1; c < k; ++c) {
        const double total = d2.sum();
        Eigen::Index chosen = 0;
        const double u = rng.uniform();
        if (total > 0.0) {
            const double target = u * total;
            double cum = 0.0;
            chosen = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                cum += d2[i];
                if (cum >= target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick_index(u, n);
        }
        centers.row(static_cast<Eigen::Index>(c)) = z.row(chosen);
        d2 = d2.cwiseMin((z.rowwise() - centers.row(static_cast<Eigen::Index>(c))).rowwise().squaredNorm());
    }

    std::vector<std::size_t> labels(static_cast<std::size_t>(n), 0);
    for (int pass = 0; pass < 10; ++pass) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index best = 0;
            (centers.rowwise() - z.row(i)).rowwise().squaredNorm().minCoeff(&best);
            if (labels[static_cast<std::size_t>(i)] != static_cast<std::size_t>(best)) {
                labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
                changed = true;
            }
        }
        if (!changed && pass > 0) break;
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(centers.rows(), centers.cols());
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(centers.rows());
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto c = static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)]);
            sums.row(c) += z.row(i);
            counts[c] += 1.0;
        }
        for (Eigen::Index c = 0; c < centers.rows(); ++c) {
            if (counts[c] > 0.0) centers.row(c) = sums.row(c) / counts[c];
        }
    }
    return labels;
}

struct MStepResult {
    std::vector<double> weights;
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covs;
    std::vector<bool> floor_active;
    std::string degenerate;
};

MStepResult m_step(const Eigen::MatrixXd& z, const Eigen::MatrixXd& resp, const FitConfig& config) {
    const Eigen::Index n = z.rows();
    const Eigen::Index m = z.cols();
    const Eigen::Index k = resp.cols();
    MStepResult out;
    const Eigen::VectorXd nk = resp.colwise().sum().transpose();
    const double total = nk.sum();
    for (Eigen::Index r = 0; r < k; ++r) {
        const double w = nk[r] / total;
        if (!(w >= kMinWeight)) {
            out.degenerate = "component weight fell below 1e-8";
            return out;
        }
        out.weights.push_back(w);
        const Eigen::VectorXd mu = (z.transpose() * resp.col(r)) / nk[r];
        const Eigen::MatrixXd centred = z.rowwise() - mu.transpose();
        Eigen::MatrixXd s = (centred.transpose() * resp.col(r).asDiagonal() * centred) / nk[r];
        s = 0.5 * (s + s.transpose()).eval();
        bool floored = false;
        if (config.mode == CovarianceMode::Spherical) {
            double s2 = s.trace() / static_cast<double>(m);
            if (s2 < config.covariance_floor) {
                s2 = config.covariance_floor;
                floored = true;
            }
            s = s2 * Eigen::MatrixXd::Identity(m, m);
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
            if (eig.eigenvalues().minCoeff() < config.covariance_floor) {
                const Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(config.covariance_floor);
                s = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
                s = 0.5 * (s + s.transpose()).eval();
                floored = true;
            }
        }
        out.means.push_back(mu);
        out.covs.push_back(std::move(s));
        out.floor_active.push_back(floored);
    }
    // normalise so the simplex constraint holds to rounding
    double wsum = 0.0;
    for (double w : out.weights) wsum += w;
    for (double& w : out.weights) w /= wsum;
    (void)n;
    return out;
}

// Log-likelihood and responsibilities under model.
double e_step(const Eigen::MatrixXd& z, const GaussianMixtureModel& model, Eigen::MatrixXd& resp) {
    const Eigen::Index n = z.rows();
    const auto k = static_cast<Eigen::Index>(model.components());
    resp.resize(n, k);
    std::vector<double> terms(static_cast<std::size_t>(k));
    std::vector<double> x(static_cast<std::size_t>(z.cols()));
    double loglik = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < z.cols(); ++j) x[static_cast<std::size_t>(j)] = z(i, j);
        model.weighted_component_log_densities(x, terms);
        const double lse = log_sum_exp(terms);
        loglik += lse;
        for (Eigen::Index r = 0; r < k; ++r) resp(i, r) = std::exp(terms[static_cast<std::size_t>(r)] - lse);
    }
    return loglik;
}

RestartOutcome run_restart(const Eigen::MatrixXd& z, const FitConfig& config, std::size_t k, Rng& rng) {
    RestartOutcome out;
    const auto labels = initial_labels(z, k, rng);
    Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(z.rows(), static_cast<Eigen::Index>(k));
    for (Eigen::Index i = 0; i < z.rows(); ++i) resp(i, static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)])) = 1.0;

    std::vector<int> floor_streak(k, 0);
    bool floored_now = false;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        MStepResult ms = m_step(z, resp, config);
        if (!ms.degenerate.empty()) {
            out.failure = ms.degenerate;
            return out;
        }
        floored_now = false;
        for (std::size_t r = 0; r < k; ++r) {
            floored_now = floored_now || ms.floor_active[r];
            floor_streak[r] = ms.floor_active[r] ? floor_streak[r] + 1 : 0;
            if (floor_streak[r] >= kFloorPatience) {
                out.failure = "covariance floor active for " + std::to_string(kFloorPatience) +
                              " consecutive iterations";
                return out;
            }
        }
        GaussianMixtureModel model(std::move(ms.weights), std::move(ms.means), std::move(ms.covs), config.mode);
        const double ll = e_step(z, model, resp);
        if (!std::isfinite(ll)) {
            out.failure = "non-finite log-likelihood";
            return out;
        }
        out.trace.push_back(ll);
        out.model = std::move(model);
        out.loglik = ll;
        out.iterations = iter;
        if (out.trace.size() >= 2) {
            const double prev = out.trace[out.trace.size() - 2];
            if (std::fabs(ll - prev) < config.tolerance * std::fabs(prev)) {
                out.converged = true;
                break;
            }
        }
    }
    // A fit that stops on the floor is held up by the floor, not the data.
    if (floored_now) {
        out.model.reset();
        out.failure = "covariance floor active at termination";
    }
    return out;
}

} // namespace

EmResult em_fit(const Eigen::MatrixXd& z, const FitConfig& config, std::size_t components) {
    config.validate();
    if (components < 1) throw DomainError("em_fit: need at least one component");
    if (!z.allFinite()) throw DomainError("em_fit: data contain non-finite values");
    if (static_cast<std::size_t>(z.rows()) <= components * static_cast<std::size_t>(z.cols())) {
        throw DomainError("em_fit: need more than R*M observations");
    }

    Rng master(config.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(components)));
    std::optional<RestartOutcome> best;
    std::vector<std::string> warnings;
    for (int r = 0; r < config.restarts; ++r) {
        Rng rng(master.split());
        RestartOutcome outcome = run_restart(z, config, components, rng);
        if (!outcome.model) {
            warnings.push_back("restart " + std::to_string(r) + ": " + outcome.failure);
            continue;
        }
        if (!best || outcome.loglik > best->loglik) best = std::move(outcome);
    }
    if (!best) {
        std::string msg = "em_fit: every restart degenerated for R=" + std::to_string(components);
        if (!warnings.empty()) msg += " (" + warnings.front() + ")";
        throw NumericalError(msg);
    }
    return EmResult{std::move(*best->model), best->loglik, std::move(best->trace), best->iterations,
                    best->converged, std::move(warnings)};
}

double bic(double loglik, std::size_t k, double n) {
    if (!(n > 1.0)) throw DomainError("bic: sample size must exceed 1");
    if (k < 1) throw DomainError("bic: parameter count must be at least 1");
    return -2.0 * loglik + static_cast<double>(k) * std::log(n);
}

std::size_t param_count(MixtureKind kind, std::size_t dim, std::size_t components) {
    if (dim < 2) throw DomainError("param_count: dimension must be at least 2");
    if (components < 1) throw DomainError("param_count: need at least one component");
    const std::size_t r = components;
    const std::size_t m = dim;
    if (kind == MixtureKind::MixtureI) return r * (m * (m - 1) / 2) + r - 1;
    return r * (m * (m + 3) / 2) + r - 1 - 2 * m;
}

const GaussianMixtureModel& FitReport::selected_model() const {
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].components == selected && models[i]) return *models[i];
    }
    throw NumericalError("FitReport: no selected model");
}

FitReport select_model(const Eigen::MatrixXd& z, const FitConfig& config) {
    config.validate();
    std::vector<std::size_t> candidates = config.candidates;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    FitReport report;
    report.n = static_cast<std::size_t>(z.rows());
    double best_bic = std::numeric_limits<double>::infinity();
    for (std::size_t r : candidates) {
        FitRecord rec;
        rec.components = r;
        try {
            EmResult res = em_fit(z, config, r);
            rec.loglik = res.loglik;
            rec.parameters = res.model.free_parameter_count();
            rec.bic = bic(res.loglik, rec.parameters, static_cast<double>(z.rows()));
            rec.iterations = res.iterations;
            rec.converged = res.converged;
            for (const auto& w : res.warnings) rec.note += (rec.note.empty() ? "" : "; ") + w;
            if (!res.converged) {
                rec.note += std::string(rec.note.empty() ? "" : "; ") + "did not converge within " +
                            std::to_string(config.max_iterations) + " iterations";
            }
            report.models.emplace_back(std::move(res.model));
        } catch (const NumericalError& e) {
            rec.loglik = std::numeric_limits<double>::quiet_NaN();
            rec.bic = std::numeric_limits<double>::quiet_NaN();
            rec.note = e.what();
            report.models.emplace_back(std::nullopt);
        }
        if (rec.converged && rec.bic < best_bic) {
            best_bic = rec.bic;
            report.selected = r;
        }
        report.records.push_back(std::move(rec));
    }
    if (report.selected == 0) throw NumericalError("select_model: no candidate converged");
    return report;
}

} // namespace copmix
