#include "copmix/model_io.hpp"

#include <set>

#include "copmix/errors.hpp"
#include "json.hpp"

namespace copmix {

using nlohmann::json;

QRDensity StoredModel::density() const {
    return QRDensity(gmm, MarginalTransform::named(transform, gmm.dim()));
}

std::string model_to_json(const StoredModel& model) {
    const auto& g = model.gmm;
    const auto m = static_cast<Eigen::Index>(g.dim());
    json doc;
    doc["format"] = kModelFormat;
    doc["version"] = kModelVersion;
    doc["dimension"] = g.dim();
    doc["components"] = g.components();
    doc["transform"] = model.transform;
    doc["covariance_mode"] = to_string(g.mode());
    doc["weights"] = g.weights();
    json means = json::array();
    json covs = json::array();
    for (std::size_t r = 0; r < g.components(); ++r) {
        means.push_back(std::vector<double>(g.means()[r].data(), g.means()[r].data() + m));
        json flat = json::array();
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) flat.push_back(g.covariances()[r](i, j));
        }
        covs.push_back(std::move(flat));
    }
    doc["means"] = std::move(means);
    doc["covariances"] = std::move(covs);

    json fit = json::object();
    const FitMetadata& f = model.fit;
    if (f.n) fit["n"] = *f.n;
    if (f.seed) fit["seed"] = *f.seed;
    if (f.loglik) fit["loglik"] = *f.loglik;
    if (f.bic) fit["bic"] = *f.bic;
    if (f.iterations) fit["iterations"] = *f.iterations;
    if (f.converged) fit["converged"] = *f.converged;
    doc["fit"] = std::move(fit);
    return doc.dump(2) + "\n";
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) throw DomainError("model: unknown key '" + item.key() + "' in " + where);
    }
}

const json& require(const json& obj, const char* key) {
    if (!obj.contains(key)) throw DomainError(std::string("model: missing key '") + key + "'");
    return obj.at(key);
}

} // namespace

StoredModel model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("model: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw DomainError("model: top level must be an object");
    reject_unknown_keys(doc,
                        {"format", "version", "dimension", "components", "transform", "covariance_mode",
                         "weights", "means", "covariances", "fit"},
                        "model");
    try {
        if (require(doc, "format").get<std::string>() != kModelFormat) {
            throw DomainError("model: format must be '" + std::string(kModelFormat) + "'");
        }
        const int version = require(doc, "version").get<int>();
        if (version != kModelVersion) {
            throw DomainError("model: unsupported version " + std::to_string(version));
        }
        const auto m = require(doc, "dimension").get<std::size_t>();
        const auto r_count = require(doc, "components").get<std::size_t>();
        const auto transform = require(doc, "transform").get<std::string>();
        if (transform != "normal" && transform != "logistic") {
            throw DomainError("model: transform must be 'normal' or 'logistic'");
        }
        const CovarianceMode mode = covariance_mode_from_string(require(doc, "covariance_mode").get<std::string>());
        auto weights = require(doc, "weights").get<std::vector<double>>();
        const auto means_raw = require(doc, "means").get<std::vector<std::vector<double>>>();
        const auto covs_raw = require(doc, "covariances").get<std::vector<std::vector<double>>>();
        if (m < 1 || weights.size() != r_count || means_raw.size() != r_count || covs_raw.size() != r_count) {
            throw DomainError("model: component arrays do not match 'components'");
        }
        std::vector<Eigen::VectorXd> means;
        std::vector<Eigen::MatrixXd> covs;
        for (std::size_t r = 0; r < r_count; ++r) {
            if (means_raw[r].size() != m || covs_raw[r].size() != m * m) {
                throw DomainError("model: component " + std::to_string(r) + " does not match 'dimension'");
            }
            means.push_back(Eigen::Map<const Eigen::VectorXd>(means_raw[r].data(), static_cast<Eigen::Index>(m)));
            covs.push_back(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                covs_raw[r].data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)));
        }

        FitMetadata fit;
        if (doc.contains("fit")) {
            const json& f = doc.at("fit");
            if (!f.is_object()) throw DomainError("model: 'fit' must be an object");
            reject_unknown_keys(f, {"n", "seed", "loglik", "bic", "iterations", "converged"}, "fit");
            if (f.contains("n")) fit.n = f.at("n").get<std::size_t>();
            if (f.contains("seed")) fit.seed = f.at("seed").get<std::uint64_t>();
            if (f.contains("loglik")) fit.loglik = f.at("loglik").get<double>();
            if (f.contains("bic")) fit.bic = f.at("bic").get<double>();
            if (f.contains("iterations")) fit.iterations = f.at("iterations").get<int>();
            if (f.contains("converged")) fit.converged = f.at("converged").get<bool>();
        }
        return StoredModel{GaussianMixtureModel(std::move(weights), std::move(means), std::move(covs), mode),
                           transform, fit};
    } catch (const json::exception& e) {
        throw DomainError(std::string("model: ") + e.what());
    }
}

} // namespace copmix
