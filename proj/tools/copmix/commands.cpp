#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numeric>

#include "CLI11.hpp"
#include "copmix/archimedean.hpp"
#include "copmix/elliptical.hpp"
#include "copmix/errors.hpp"
#include "copmix/numeric.hpp"
#include "copmix/reference_copulas.hpp"
#include "copmix/rng.hpp"
#include "csv_io.hpp"

namespace copmix::cli {

using nlohmann::json;

namespace {

ArchimedeanFamily archimedean_of(CopulaFamily f) { return archimedean_family_from_string(to_string(f)); }

bool is_archimedean(CopulaFamily f) {
    return f == CopulaFamily::Clayton || f == CopulaFamily::AliMikhailHaq || f == CopulaFamily::Gumbel ||
           f == CopulaFamily::Frank;
}

CorrelationMatrix correlation_of(const CopulaSpec& c) {
    const auto m = static_cast<Eigen::Index>(c.dim);
    return CorrelationMatrix(Eigen::Map<const Eigen::MatrixXd>(c.correlation.data(), m, m));
}

std::vector<std::string> column_names(const char* prefix, std::size_t dim) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < dim; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

json coords_json(const UnitPoint& u) { return std::vector<double>(u.coords().begin(), u.coords().end()); }

// Search sets for the gap reports. Two dimensions use the default grid with
// the named witnesses; higher dimensions use seeded uniform points.
std::vector<UnitPoint> gap_points(std::size_t dim, std::uint64_t seed) {
    if (dim == 2) return default_radial_points();
    Rng rng(seed);
    std::vector<UnitPoint> out;
    std::vector<double> c(dim);
    for (int k = 0; k < 2000; ++k) {
        for (auto& x : c) x = rng.uniform();
        out.emplace_back(c);
    }
    return out;
}

std::vector<PermutedPoint> exchange_points(const std::vector<UnitPoint>& pts) {
    const std::size_t dim = pts.front().dim();
    std::vector<std::size_t> swap(dim);
    std::iota(swap.begin(), swap.end(), std::size_t{0});
    std::swap(swap[0], swap[1]);
    std::vector<std::size_t> shift(dim);
    for (std::size_t i = 0; i < dim; ++i) shift[i] = (i + 1) % dim;
    std::vector<PermutedPoint> out;
    for (const auto& u : pts) {
        out.emplace_back(u, swap);
        if (dim > 2) out.emplace_back(u, shift);
    }
    return out;
}

std::vector<std::vector<double>> columns_of(const std::vector<UnitPoint>& pts) {
    const std::size_t dim = pts.front().dim();
    std::vector<std::vector<double>> cols(dim);
    for (const auto& u : pts) {
        for (std::size_t i = 0; i < dim; ++i) cols[i].push_back(u[i]);
    }
    return cols;
}

} // namespace

std::vector<UnitPoint> sample_copula(const CopulaSpec& c, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("sample: n must be at least 1");
    switch (c.family) {
    case CopulaFamily::Example: {
        const ExampleCopula cop(c.alpha, c.beta, c.theta);
        Rng rng(seed);
        std::vector<UnitPoint> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto [u, v] = cop.sample(rng);
            out.push_back(UnitPoint{u, v});
        }
        return out;
    }
    case CopulaFamily::Gaussian:
        return GaussianCopula(correlation_of(c)).sample(n, seed);
    default: {
        const ArchimedeanGenerator g(archimedean_of(c.family), c.theta);
        LatentSampler s(g.family(), c.theta, seed);
        return kimberling_sample(g, s, n, c.dim);
    }
    }
}

DensityFn copula_density(const CopulaSpec& c, bool finite_difference) {
    switch (c.family) {
    case CopulaFamily::Example: {
        const ExampleCopula cop(c.alpha, c.beta, c.theta);
        return [cop](const UnitPoint& u) { return cop.density(u); };
    }
    case CopulaFamily::Gaussian: {
        const GaussianCopula cop(correlation_of(c));
        return [cop](const UnitPoint& u) { return cop.density(u); };
    }
    case CopulaFamily::Clayton: {
        const ClaytonCopula cop(c.theta, c.dim);
        return [cop](const UnitPoint& u) { return cop.density(u); };
    }
    default:
        break;
    }
    if (c.dim > 2 && !finite_difference) {
        throw DomainError("no closed-form density for " + to_string(c.family) + " in dimension " +
                          std::to_string(c.dim) + "; set diagnostics.finite_difference = true");
    }
    const ArchimedeanGenerator g(archimedean_of(c.family), c.theta);
    return [g](const UnitPoint& u) {
        return mixed_partial([&g](std::span<const double> x) { return archimedean_cdf(g, x); }, u.coords());
    };
}

Eigen::MatrixXd generate_data(const ExperimentSpec& spec) {
    if (!spec.copula) throw DomainError("spec has no copula.family to sample from");
    const auto pts = sample_copula(*spec.copula, spec.n, spec.seed);
    const auto dim = static_cast<Eigen::Index>(spec.copula->dim);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(spec.n), dim);
    std::shared_ptr<const Marginal> margin;
    if (spec.margin) margin = make_margin(*spec.margin);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const UnitPoint& u = pts[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < dim; ++j) {
            const double v = u[static_cast<std::size_t>(j)];
            out(i, j) = margin ? margin->quantile(v) : v;
        }
    }
    return out;
}

FitOutcome fit_data(const Eigen::MatrixXd& data, const FitConfig& config, const std::string& transform) {
    if (data.cols() < 2) throw DomainError("fit: data need at least two columns");
    const auto t = MarginalTransform::named(transform, static_cast<std::size_t>(data.cols()));
    const Eigen::MatrixXd u = pseudo_observations(data);
    const Eigen::MatrixXd z = latent_embed(u, t);
    FitReport report = select_model(z, config);
    const GaussianMixtureModel& gmm = report.selected_model();
    FitMetadata meta;
    meta.n = report.n;
    meta.seed = config.seed;
    for (const auto& rec : report.records) {
        if (rec.components != report.selected) continue;
        meta.loglik = rec.loglik;
        meta.bic = rec.bic;
        meta.iterations = rec.iterations;
        meta.converged = rec.converged;
    }
    StoredModel model{gmm, transform, meta};
    return FitOutcome{std::move(report), std::move(model)};
}

json fit_report_json(const FitReport& report, std::size_t dim, const FitConfig& config, const std::string& transform) {
    json rows = json::array();
    for (const auto& rec : report.records) {
        json row{{"components", rec.components},
                 {"loglik", std::isfinite(rec.loglik) ? json(rec.loglik) : json(nullptr)},
                 {"parameters", rec.parameters},
                 {"bic", std::isfinite(rec.bic) ? json(rec.bic) : json(nullptr)},
                 {"iterations", rec.iterations},
                 {"converged", rec.converged},
                 {"mixture_i_parameters", param_count(MixtureKind::MixtureI, dim, rec.components)},
                 {"mixture_ii_parameters", param_count(MixtureKind::MixtureII, dim, rec.components)}};
        if (!rec.note.empty()) row["note"] = rec.note;
        rows.push_back(std::move(row));
    }
    return json{{"n", report.n},
                {"dimension", dim},
                {"transform", transform},
                {"covariance_mode", to_string(config.mode)},
                {"seed", config.seed},
                {"criterion", "bic"},
                {"selected", report.selected},
                {"records", std::move(rows)}};
}

Eigen::MatrixXd density_grid(const QRDensity& q, std::size_t grid_per_dim) {
    if (grid_per_dim < 1) throw DomainError("density: grid must be at least 1");
    const auto pts = midpoint_grid(grid_per_dim, q.dim());
    Eigen::MatrixXd out(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(q.dim() + 1));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        for (std::size_t k = 0; k < q.dim(); ++k) out(row, static_cast<Eigen::Index>(k)) = pts[i][k];
        out(row, static_cast<Eigen::Index>(q.dim())) = q.density(pts[i]);
    }
    return out;
}

Eigen::MatrixXd density_points(const QRDensity& q, const Eigen::MatrixXd& points) {
    if (static_cast<std::size_t>(points.cols()) != q.dim()) {
        throw DomainError("density: points have " + std::to_string(points.cols()) + " columns but the model has dimension " +
                          std::to_string(q.dim()));
    }
    Eigen::MatrixXd out(points.rows(), points.cols() + 1);
    out.leftCols(points.cols()) = points;
    std::vector<double> c(q.dim());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (std::size_t k = 0; k < q.dim(); ++k) c[k] = points(i, static_cast<Eigen::Index>(k));
        out(i, points.cols()) = q.density(UnitPoint(c));
    }
    return out;
}

json diagnose_density(const DensityFn& f, std::size_t dim, const std::vector<std::vector<double>>& margin_samples,
                      const std::optional<DensityFn>& reference, const DiagnosticsSpec& d, std::uint64_t seed) {
    const auto pts = gap_points(dim, seed);
    const auto pairs = exchange_points(pts);
    const GapReport ex = exchangeability_gap(f, pairs);
    const GapReport rad = radial_symmetry_gap(f, pts);
    json report{{"dimension", dim}, {"exchangeability", to_json(ex)}, {"radial_symmetry", to_json(rad)}};

    json ks = json::array();
    for (std::size_t i = 0; i < margin_samples.size(); ++i) {
        json k = to_json(ks_uniformity(margin_samples[i]));
        k["margin"] = i + 1;
        ks.push_back(std::move(k));
    }
    report["marginal_ks"] = std::move(ks);

    if (reference) {
        json dist = json::object();
        dist["l1"] = to_json(l1_distance(f, *reference, dim, d.l1_samples, seed));
        if (dim <= 3) {
            const std::vector<UnitPoint> witnesses{ex.witness, ex.counterpart, rad.witness, rad.counterpart};
            const std::size_t grid = dim == 3 ? std::min<std::size_t>(d.grid, 40) : d.grid;
            dist["linf"] = to_json(linf_distance(f, *reference, dim, grid, witnesses));
        }
        report["distance_to_reference"] = std::move(dist);
    }
    return report;
}

json diagnose_model(const QRDensity& q, const std::optional<CopulaSpec>& reference, const DiagnosticsSpec& d,
                    std::size_t ks_samples, std::uint64_t seed) {
    std::optional<DensityFn> ref;
    if (reference) {
        if (reference->dim != q.dim()) throw DomainError("diagnose: reference copula dimension does not match model");
        ref = copula_density(*reference, d.finite_difference);
    }
    const DensityFn f = [&q](const UnitPoint& u) { return q.density(u); };
    const auto draws = q.sample(ks_samples, seed ^ 0x6a09e667f3bcc909ULL);
    json report = diagnose_density(f, q.dim(), columns_of(draws), ref, d, seed);
    report["source"] = "model";
    if (reference) report["reference"] = to_string(reference->family);

    // Sup of |q_i - 1| over a 999-point grid, per margin.
    json dev = json::array();
    for (std::size_t i = 0; i < q.dim(); ++i) {
        double worst = 0.0;
        for (int k = 1; k < 1000; ++k) worst = std::max(worst, std::fabs(q.marginal_density(i, k / 1000.0) - 1.0));
        dev.push_back(worst);
    }
    report["marginal_density_max_deviation"] = std::move(dev);
    return report;
}

json diagnose_copula(const CopulaSpec& c, const DiagnosticsSpec& d, std::uint64_t seed) {
    const DensityFn f = copula_density(c, d.finite_difference);
    const std::size_t n = d.ks_samples ? d.ks_samples : 10000;
    const auto draws = sample_copula(c, n, seed);
    json report = diagnose_density(f, c.dim, columns_of(draws), std::nullopt, d, seed);
    report["source"] = to_string(c.family);
    return report;
}

std::string summary_csv(const FitReport& report, std::size_t dim) {
    std::string out =
        "components,loglik,parameters,bic,iterations,converged,selected,mixture_i_parameters,mixture_ii_parameters\n";
    for (const auto& rec : report.records) {
        out += std::to_string(rec.components) + ',' + format_double(rec.loglik) + ',' +
               std::to_string(rec.parameters) + ',' + format_double(rec.bic) + ',' + std::to_string(rec.iterations) +
               ',' + (rec.converged ? "true" : "false") + ',' +
               (rec.components == report.selected ? "true" : "false") + ',' +
               std::to_string(param_count(MixtureKind::MixtureI, dim, rec.components)) + ',' +
               std::to_string(param_count(MixtureKind::MixtureII, dim, rec.components)) + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Flags {
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string out;
    std::optional<std::size_t> grid;
    std::string candidates;
    std::string cov_mode;
    std::string transform;
    std::string model;
    std::string points;
    std::string report;
    std::string data;
};

ExperimentSpec spec_with_flags(const Flags& f, bool require_config) {
    ExperimentSpec spec;
    if (!f.config.empty()) {
        spec = to_experiment_spec(SpecFile::load(f.config));
    } else if (require_config) {
        throw DomainError("--config is required");
    }
    if (f.seed) {
        spec.seed = *f.seed;
        spec.fit.seed = *f.seed;
    }
    if (!f.candidates.empty()) spec.fit.candidates = parse_count_list(f.candidates, "--candidates");
    if (!f.cov_mode.empty()) spec.fit.mode = covariance_mode_from_string(f.cov_mode);
    if (!f.transform.empty()) {
        MarginalTransform::named(f.transform, 1);
        spec.transform = f.transform;
    }
    if (f.grid) {
        if (*f.grid < 8) throw DomainError("--grid must be at least 8");
        spec.diagnostics.grid = *f.grid;
    }
    spec.fit.validate();
    return spec;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_text(path, text);
    }
}

void cmd_sample(const Flags& f, std::ostream& out) {
    const ExperimentSpec spec = spec_with_flags(f, true);
    const Eigen::MatrixXd data = generate_data(spec);
    emit(f.out, to_csv(data, column_names("x", static_cast<std::size_t>(data.cols()))), out);
}

void cmd_fit(const Flags& f, std::ostream& out) {
    const ExperimentSpec spec = spec_with_flags(f, false);
    if (f.out.empty()) throw DomainError("fit: --out model path is required");
    const Eigen::MatrixXd data = read_csv(f.data);
    const FitOutcome fit = fit_data(data, spec.fit, spec.transform);
    const json report = fit_report_json(fit.report, static_cast<std::size_t>(data.cols()), spec.fit, spec.transform);
    write_text(f.out, model_to_json(fit.model));
    emit(f.report, dump(report), out);
}

void cmd_density(const Flags& f, std::ostream& out) {
    if (f.model.empty()) throw DomainError("density: --model is required");
    if (f.grid.has_value() == !f.points.empty()) throw DomainError("density: give exactly one of --grid or --points");
    const StoredModel model = model_from_json(read_text(f.model));
    const QRDensity q = model.density();
    Eigen::MatrixXd table;
    if (f.grid) {
        if (*f.grid < 1) throw DomainError("--grid must be positive");
        table = density_grid(q, *f.grid);
    } else {
        table = density_points(q, read_csv(f.points));
    }
    auto header = column_names("u", q.dim());
    header.push_back("density");
    emit(f.out, to_csv(table, header), out);
}

void cmd_diagnose(const Flags& f, std::ostream& out) {
    if (f.model.empty() && f.config.empty()) throw DomainError("diagnose: give --model, --config or both");
    const ExperimentSpec spec = spec_with_flags(f, false);
    json report;
    if (!f.model.empty()) {
        const StoredModel model = model_from_json(read_text(f.model));
        const std::size_t ks_n =
            spec.diagnostics.ks_samples ? spec.diagnostics.ks_samples : (model.fit.n ? *model.fit.n : 10000);
        report = diagnose_model(model.density(), spec.copula, spec.diagnostics, ks_n, spec.seed);
    } else {
        if (!spec.copula) throw DomainError("diagnose: config names no copula.family");
        report = diagnose_copula(*spec.copula, spec.diagnostics, spec.seed);
    }
    emit(f.out, dump(report), out);
}

template <class Fn>
void stage(const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const DomainError& e) {
        throw StageError(name, kExitInput, e.what());
    } catch (const NumericalError& e) {
        throw StageError(name, kExitNumerical, e.what());
    }
}

void cmd_experiment(const Flags& f, std::ostream& out) {
    const ExperimentSpec spec = spec_with_flags(f, true);
    if (f.out.empty()) throw DomainError("experiment: --out directory is required");
    if (!spec.copula) throw DomainError("experiment: config names no copula.family");
    const std::filesystem::path dir(f.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DomainError("cannot create output directory '" + f.out + "': " + ec.message());
    const std::size_t grid = f.grid.value_or(50);

    Eigen::MatrixXd data;
    stage("sample", [&] {
        data = generate_data(spec);
        write_text((dir / "data.csv").string(), to_csv(data, column_names("x", spec.copula->dim)));
    });
    std::optional<FitOutcome> fit;
    stage("fit", [&] {
        fit = fit_data(data, spec.fit, spec.transform);
        write_text((dir / "fit_report.json").string(),
                   dump(fit_report_json(fit->report, spec.copula->dim, spec.fit, spec.transform)));
        write_text((dir / "model.json").string(), model_to_json(fit->model));
    });
    const QRDensity q = fit->model.density();
    stage("density", [&] {
        auto header = column_names("u", q.dim());
        header.push_back("density");
        write_text((dir / "density.csv").string(), to_csv(density_grid(q, grid), header));
    });
    json diag;
    stage("diagnose", [&] {
        const std::size_t ks_n = spec.diagnostics.ks_samples ? spec.diagnostics.ks_samples : spec.n;
        diag = diagnose_model(q, spec.copula, spec.diagnostics, ks_n, spec.seed);
        write_text((dir / "diagnostics.json").string(), dump(diag));
    });
    const std::string summary = summary_csv(fit->report, spec.copula->dim);
    stage("summary", [&] { write_text((dir / "summary.csv").string(), summary); });
    out << summary;
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message, int code,
                 const std::string& stage_name = "") {
    json j{{"error", kind}, {"message", message}, {"exit_code", code}};
    if (!stage_name.empty()) j["stage"] = stage_name;
    err << j.dump() << "\n";
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Copula density approximation by latent Gaussian mixtures"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", f.seed, "Random seed (overrides the spec)");
        sub->add_option("--config", f.config, "Spec file");
    };
    auto add_fit_flags = [&](CLI::App* sub) {
        sub->add_option("--candidates", f.candidates, "Comma-separated component counts");
        sub->add_option("--cov-mode", f.cov_mode, "Covariance mode")->check(CLI::IsMember({"spherical", "full"}));
        sub->add_option("--transform", f.transform, "Latent margin")->check(CLI::IsMember({"normal", "logistic"}));
    };

    auto* sample = app.add_subcommand("sample", "Draw data from a spec");
    add_common(sample);
    sample->add_option("--out", f.out, "Output CSV (default stdout)");

    auto* fit = app.add_subcommand("fit", "Fit latent mixtures and select by BIC");
    add_common(fit);
    add_fit_flags(fit);
    fit->add_option("data", f.data, "Data CSV")->required();
    fit->add_option("--out", f.out, "Model JSON output")->required();
    fit->add_option("--report", f.report, "Fit report JSON (default stdout)");

    auto* density = app.add_subcommand("density", "Evaluate a fitted model");
    density->add_option("--model", f.model, "Model JSON")->required();
    density->add_option("--grid", f.grid, "Points per axis of the midpoint grid");
    density->add_option("--points", f.points, "CSV of points in (0,1)^M");
    density->add_option("--out", f.out, "Output CSV (default stdout)");

    auto* diagnose = app.add_subcommand("diagnose", "Symmetry gaps, marginal KS and distances");
    add_common(diagnose);
    diagnose->add_option("--model", f.model, "Model JSON");
    diagnose->add_option("--grid", f.grid, "Linf grid points per axis");
    diagnose->add_option("--out", f.out, "Report JSON (default stdout)");

    auto* experiment = app.add_subcommand("experiment", "Sample, fit, evaluate and diagnose");
    add_common(experiment);
    add_fit_flags(experiment);
    experiment->add_option("--out", f.out, "Output directory")->required();
    experiment->add_option("--grid", f.grid, "Density grid points per axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage", e.what(), kExitInput);
        return kExitInput;
    }

    try {
        if (sample->parsed()) cmd_sample(f, out);
        else if (fit->parsed()) cmd_fit(f, out);
        else if (density->parsed()) cmd_density(f, out);
        else if (diagnose->parsed()) cmd_diagnose(f, out);
        else if (experiment->parsed()) cmd_experiment(f, out);
    } catch (const StageError& e) {
        write_error(err, e.exit_code() == kExitInput ? "input" : "numerical", e.what(), e.exit_code(), e.stage());
        return e.exit_code();
    } catch (const DomainError& e) {
        write_error(err, "input", e.what(), kExitInput);
        return kExitInput;
    } catch (const NumericalError& e) {
        write_error(err, "numerical", e.what(), kExitNumerical);
        return kExitNumerical;
    }
    return kExitOk;
}

} // namespace copmix::cli
