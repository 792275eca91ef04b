#include "spec_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "copmix/archimedean.hpp"
#include "copmix/elliptical.hpp"
#include "copmix/errors.hpp"
#include "copmix/reference_copulas.hpp"

namespace copmix::cli {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "schema",          "n",
        "seed",            "dimension",
        "copula.family",   "copula.alpha",
        "copula.beta",     "copula.theta",
        "copula.rho",      "copula.correlation",
        "margin.weights",  "margin.means",
        "margin.sds",      "candidates",
        "cov_mode",        "transform",
        "fit.max_iterations", "fit.tolerance",
        "fit.restarts",    "fit.covariance_floor",
        "diagnostics.l1_samples", "diagnostics.grid",
        "diagnostics.ks_samples", "diagnostics.finite_difference",
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& raw, const std::string& what) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
        throw DomainError(what + ": '" + s + "' is not a finite number");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& raw, const std::string& what) {
    const std::string s = trim(raw);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw DomainError(what + ": '" + s + "' is not a non-negative integer");
    }
    return v;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

} // namespace

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const auto& item : split_commas(text)) out.push_back(parse_double(item, what));
    if (out.empty()) throw DomainError(what + ": empty list");
    return out;
}

std::vector<std::size_t> parse_count_list(const std::string& text, const std::string& what) {
    std::vector<std::size_t> out;
    for (const auto& item : split_commas(text)) {
        const auto v = parse_u64(item, what);
        if (v == 0) throw DomainError(what + ": counts must be positive");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw DomainError(what + ": empty list");
    return out;
}

SpecFile SpecFile::parse(const std::string& text) {
    SpecFile spec;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "spec line " + std::to_string(lineno);
        if (eq == std::string::npos) throw DomainError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key)) throw DomainError(where + ": unknown key '" + key + "'");
        if (spec.values_.empty() && key != "schema") throw DomainError(where + ": first key must be 'schema'");
        if (!spec.values_.emplace(key, value).second) throw DomainError(where + ": duplicate key '" + key + "'");
    }
    if (!spec.has("schema")) throw DomainError("spec: missing 'schema'");
    if (spec.get_string("schema") != kSpecSchema) {
        throw DomainError("spec: unsupported schema '" + spec.get_string("schema") + "' (expected " +
                          kSpecSchema + ")");
    }
    return spec;
}

SpecFile SpecFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read spec file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string SpecFile::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw DomainError("spec: missing key '" + key + "'");
    return it->second;
}

double SpecFile::get_double(const std::string& key) const { return parse_double(get_string(key), key); }

std::uint64_t SpecFile::get_u64(const std::string& key) const { return parse_u64(get_string(key), key); }

bool SpecFile::get_bool(const std::string& key) const {
    const std::string v = get_string(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw DomainError(key + ": expected true or false");
}

std::vector<double> SpecFile::get_doubles(const std::string& key) const {
    return parse_double_list(get_string(key), key);
}

std::vector<std::size_t> SpecFile::get_counts(const std::string& key) const {
    return parse_count_list(get_string(key), key);
}

// ---------------------------------------------------------------------------

std::string to_string(CopulaFamily f) {
    switch (f) {
    case CopulaFamily::Example: return "example";
    case CopulaFamily::Clayton: return "clayton";
    case CopulaFamily::AliMikhailHaq: return "amh";
    case CopulaFamily::Gumbel: return "gumbel";
    case CopulaFamily::Frank: return "frank";
    case CopulaFamily::Gaussian: return "gaussian";
    }
    return "unknown";
}

namespace {

CopulaFamily family_from_string(const std::string& s) {
    for (auto f : {CopulaFamily::Example, CopulaFamily::Clayton, CopulaFamily::AliMikhailHaq,
                   CopulaFamily::Gumbel, CopulaFamily::Frank, CopulaFamily::Gaussian}) {
        if (to_string(f) == s) return f;
    }
    throw DomainError("copula.family: unknown family '" + s +
                      "' (expected example, clayton, amh, gumbel, frank or gaussian)");
}

CopulaSpec read_copula(const SpecFile& f, std::size_t dim) {
    CopulaSpec c;
    c.family = family_from_string(f.get_string("copula.family"));
    c.dim = dim;
    auto forbid = [&](const char* key) {
        if (f.has(key)) throw DomainError(std::string(key) + " does not apply to family " + to_string(c.family));
    };
    switch (c.family) {
    case CopulaFamily::Example:
        if (dim != 2) throw DomainError("the example copula is bivariate; dimension must be 2");
        c.alpha = f.get_double("copula.alpha");
        c.beta = f.get_double("copula.beta");
        c.theta = f.get_double("copula.theta");
        forbid("copula.rho");
        forbid("copula.correlation");
        ExampleCopula(c.alpha, c.beta, c.theta);
        break;
    case CopulaFamily::Gaussian: {
        forbid("copula.alpha");
        forbid("copula.beta");
        forbid("copula.theta");
        if (f.has("copula.rho") == f.has("copula.correlation")) {
            throw DomainError("gaussian copula needs exactly one of copula.rho or copula.correlation");
        }
        if (f.has("copula.rho")) {
            if (dim != 2) throw DomainError("copula.rho is only valid in dimension 2");
            const double rho = f.get_double("copula.rho");
            c.correlation = {1.0, rho, rho, 1.0};
        } else {
            c.correlation = f.get_doubles("copula.correlation");
        }
        if (c.correlation.size() != dim * dim) {
            throw DomainError("copula.correlation must have dimension^2 entries");
        }
        const auto m = static_cast<Eigen::Index>(dim);
        CorrelationMatrix(Eigen::Map<const Eigen::MatrixXd>(c.correlation.data(), m, m));
        break;
    }
    default: {
        forbid("copula.alpha");
        forbid("copula.beta");
        forbid("copula.rho");
        forbid("copula.correlation");
        c.theta = f.get_double("copula.theta");
        ArchimedeanGenerator(archimedean_family_from_string(to_string(c.family)), c.theta);
        break;
    }
    }
    return c;
}

} // namespace

std::shared_ptr<const Marginal> make_margin(const MarginSpec& m) {
    return std::make_shared<NormalMixtureMarginal>(m.weights, m.means, m.sds);
}

ExperimentSpec to_experiment_spec(const SpecFile& f) {
    ExperimentSpec s;
    if (f.has("n")) s.n = static_cast<std::size_t>(f.get_u64("n"));
    if (s.n < 100) throw DomainError("n must be at least 100");
    if (f.has("seed")) s.seed = f.get_u64("seed");
    const std::size_t dim = f.has("dimension") ? static_cast<std::size_t>(f.get_u64("dimension")) : 2;
    if (dim < 2) throw DomainError("dimension must be at least 2");

    if (f.has("copula.family")) {
        s.copula = read_copula(f, dim);
    } else {
        for (const char* key : {"copula.alpha", "copula.beta", "copula.theta", "copula.rho", "copula.correlation"}) {
            if (f.has(key)) throw DomainError(std::string(key) + " given without copula.family");
        }
    }

    if (f.has("margin.means") || f.has("margin.sds") || f.has("margin.weights")) {
        MarginSpec m;
        m.means = f.get_doubles("margin.means");
        m.sds = f.get_doubles("margin.sds");
        if (m.sds.size() == 1) m.sds.assign(m.means.size(), m.sds.front());
        if (f.has("margin.weights")) {
            m.weights = f.get_doubles("margin.weights");
            double total = 0.0;
            for (double w : m.weights) {
                if (!(w > 0.0)) throw DomainError("margin.weights must be positive");
                total += w;
            }
            if (std::fabs(total - 1.0) > 1e-9) throw DomainError("margin.weights must sum to 1");
            for (double& w : m.weights) w /= total;
        } else {
            m.weights.assign(m.means.size(), 1.0 / static_cast<double>(m.means.size()));
        }
        if (m.weights.size() != m.means.size() || m.sds.size() != m.means.size()) {
            throw DomainError("margin.weights, margin.means and margin.sds must have equal length");
        }
        make_margin(m);
        s.margin = std::move(m);
    }

    if (f.has("candidates")) s.fit.candidates = f.get_counts("candidates");
    if (f.has("cov_mode")) s.fit.mode = covariance_mode_from_string(f.get_string("cov_mode"));
    if (f.has("transform")) s.transform = f.get_string("transform");
    MarginalTransform::named(s.transform, 1);
    if (f.has("fit.max_iterations")) s.fit.max_iterations = static_cast<int>(f.get_u64("fit.max_iterations"));
    if (f.has("fit.tolerance")) s.fit.tolerance = f.get_double("fit.tolerance");
    if (f.has("fit.restarts")) s.fit.restarts = static_cast<int>(f.get_u64("fit.restarts"));
    if (f.has("fit.covariance_floor")) s.fit.covariance_floor = f.get_double("fit.covariance_floor");
    s.fit.seed = s.seed;
    s.fit.validate();

    if (f.has("diagnostics.l1_samples")) s.diagnostics.l1_samples = f.get_u64("diagnostics.l1_samples");
    if (f.has("diagnostics.grid")) s.diagnostics.grid = f.get_u64("diagnostics.grid");
    if (f.has("diagnostics.ks_samples")) s.diagnostics.ks_samples = f.get_u64("diagnostics.ks_samples");
    if (f.has("diagnostics.finite_difference")) {
        s.diagnostics.finite_difference = f.get_bool("diagnostics.finite_difference");
    }
    if (s.diagnostics.l1_samples < 2) throw DomainError("diagnostics.l1_samples must be at least 2");
    if (s.diagnostics.grid < 8) throw DomainError("diagnostics.grid must be at least 8");
    return s;
}

} // namespace copmix::cli
