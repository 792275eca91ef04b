// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Each criterion also has a wall-clock budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "copmix/archimedean.hpp"
#include "copmix/diagnostics.hpp"
#include "copmix/elliptical.hpp"
#include "copmix/mixture_fit.hpp"
#include "copmix/numeric.hpp"
#include "copmix/qr_density.hpp"
#include "copmix/reference_copulas.hpp"
#include "copmix/rng.hpp"
#include "oracles.hpp"
#include "spec_file.hpp"

using namespace copmix;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<void(Outcome&)> body;
};

UnitPoint random_point(std::size_t m, Rng& rng) {
    std::vector<double> c(m);
    for (auto& x : c) x = rng.uniform();
    return UnitPoint(c);
}

std::vector<double> column(const std::vector<UnitPoint>& pts, std::size_t m) {
    std::vector<double> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(p[m]);
    return out;
}

Eigen::MatrixXd random_correlation(std::size_t m, Rng& rng) {
    Eigen::MatrixXd a(m, m);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    const Eigen::MatrixXd s = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(m, m);
    return CorrelationMatrix::from_covariance(s).matrix();
}

GaussianMixtureModel random_gmm(std::size_t m, std::size_t r_count, Rng& rng) {
    std::vector<double> w;
    std::vector<Eigen::VectorXd> mu;
    std::vector<Eigen::MatrixXd> cov;
    for (std::size_t r = 0; r < r_count; ++r) {
        w.push_back(0.2 + rng.uniform());
        Eigen::VectorXd v(m);
        for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = 2.0 * rng.normal();
        mu.push_back(v);
        Eigen::MatrixXd a(m, m);
        for (Eigen::Index k = 0; k < a.size(); ++k) a.data()[k] = 0.7 * rng.normal();
        cov.push_back(a * a.transpose() + 0.3 * Eigen::MatrixXd::Identity(m, m));
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    return GaussianMixtureModel(w, mu, cov, CovarianceMode::Full);
}

void clayton_radial_gap(Outcome& o) {
    const ClaytonCopula c(1.0, 2);
    const std::vector<UnitPoint> pts{UnitPoint{0.1, 0.5}};
    const auto r = radial_symmetry_gap([&](const UnitPoint& u) { return c.density(u); }, pts);
    const double exact = std::fabs(0.9 / std::pow(0.95, 3) - 0.1 / std::pow(0.55, 3));
    o.detail << "eta=" << r.eta << " closed form=" << exact << ' ';
    o.check(r.eta > 0.4, "eta > 0.4");
    o.check(std::fabs(r.eta - exact) < 1e-9, "closed form within 1e-9");
}

void example_exchange_gaps(Outcome& o) {
    const ExampleCopula c(0.25, 0.5, 20.0);
    const std::vector<PermutedPoint> pts{{UnitPoint{1.0 / 3, 2.0 / 3}, {1, 0}}};
    const auto cdf_gap = exchangeability_gap([&](const UnitPoint& u) { return c.cdf(u[0], u[1]); }, pts);
    const auto dens_gap = exchangeability_gap([&](const UnitPoint& u) { return c.density(u); }, pts);
    o.detail << "cdf gap=" << cdf_gap.eta << " density gap=" << dens_gap.eta << ' ';
    o.check(cdf_gap.eta > 0.2, "cdf gap > 0.2");
    o.check(dens_gap.eta > 0.3, "density gap > 0.3");
    const auto cdf = [&](std::span<const double> u) { return c.cdf(u[0], u[1]); };
    double worst = 0.0;
    for (const UnitPoint& u : {UnitPoint{1.0 / 3, 2.0 / 3}, UnitPoint{2.0 / 3, 1.0 / 3}}) {
        worst = std::max(worst, std::fabs(c.density(u) - mixed_partial(cdf, u.coords())));
    }
    o.detail << "max |density - finite difference|=" << worst << ' ';
    o.check(worst < 1e-4, "finite-difference agreement within 1e-4");
}

void qr_identity(Outcome& o) {
    const std::vector<double> sigma{1.0};
    const QRDensity q(GaussianMixtureModel::spherical({1.0}, {Eigen::VectorXd::Zero(2)}, sigma),
                      MarginalTransform::standard_normal(2));
    double worst = 0.0;
    for (const auto& u : midpoint_grid(100, 2)) worst = std::max(worst, std::fabs(q.density(u) - 1.0));
    o.detail << "max |q - 1|=" << worst << ' ';
    o.check(worst < 1e-10, "identity within 1e-10");
}

void kimberling_clayton(Outcome& o) {
    const std::size_t n = 100000;
    const ArchimedeanGenerator g(ArchimedeanFamily::Clayton, 1.0);
    LatentSampler latent(ArchimedeanFamily::Clayton, 1.0, 2024);
    const auto pts = kimberling_sample(g, latent, n, 2);
    std::vector<std::pair<double, double>> xy;
    for (const auto& p : pts) xy.emplace_back(p[0], p[1]);
    const ClaytonCopula c(1.0, 2);
    double worst = 0.0;
    for (const auto& u : midpoint_grid(20, 2)) {
        worst = std::max(worst, std::fabs(oracle::empirical_cdf2(xy, u[0], u[1]) - c.cdf(u)));
    }
    const double ks1 = ks_uniformity(column(pts, 0)).statistic;
    const double ks2 = ks_uniformity(column(pts, 1)).statistic;
    o.detail << "sup cdf error=" << worst << " ks=" << ks1 << ',' << ks2 << ' ';
    o.check(worst < 0.01, "cdf error < 0.01");
    o.check(ks1 < 0.006 && ks2 < 0.006, "margin ks < 0.006");
}

void example_sampler(Outcome& o) {
    const std::size_t n = 100000;
    const ExampleCopula c(0.75, 0.5, 20.0);
    Rng rng(31337);
    std::vector<std::pair<double, double>> xy;
    std::vector<double> u1;
    std::vector<double> u2;
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b] = c.sample(rng);
        xy.emplace_back(a, b);
        u1.push_back(a);
        u2.push_back(b);
    }
    double worst = 0.0;
    for (double a : {0.25, 0.5, 0.75}) {
        for (double b : {0.25, 0.5, 0.75}) worst = std::max(worst, std::fabs(oracle::empirical_cdf2(xy, a, b) - c.cdf(a, b)));
    }
    const double ks1 = ks_uniformity(u1).statistic;
    const double ks2 = ks_uniformity(u2).statistic;
    o.detail << "max cdf error=" << worst << " ks=" << ks1 << ',' << ks2 << ' ';
    o.check(worst < 0.01, "cdf error < 0.01");
    o.check(ks1 < 0.006 && ks2 < 0.006, "margin ks < 0.006");
}

void replication(Outcome& o) {
    const auto spec = cli::to_experiment_spec(cli::SpecFile::load(COPMIX_SOURCE_DIR "/configs/replication.spec"));
    const Eigen::MatrixXd data = cli::generate_data(spec);
    const cli::FitOutcome fit = cli::fit_data(data, spec.fit, spec.transform);
    const std::size_t sel = fit.report.selected;
    o.detail << "selected R=" << sel << " bic=";
    for (const auto& r : fit.report.records) o.detail << r.components << ':' << r.bic << (r.converged ? "" : "(nc)") << ' ';
    o.check(sel <= 4, "selected R <= 4");

    const QRDensity q = fit.model.density();
    const auto draws = q.sample(spec.n, spec.seed);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto ks = ks_uniformity(column(draws, i));
        o.detail << "ks" << i + 1 << '=' << ks.statistic << "/" << ks.critical_1pct << ' ';
        o.check(!ks.reject_1pct, "margin " + std::to_string(i + 1) + " ks at 1%");
    }

    const auto t = MarginalTransform::named(spec.transform, 2);
    const Eigen::MatrixXd z = latent_embed(pseudo_observations(data), t);
    const EmResult one = em_fit(z, spec.fit, 1);
    const QRDensity q1(one.model, t);
    const ExampleCopula truth(spec.copula->alpha, spec.copula->beta, spec.copula->theta);
    const DensityFn c = [&](const UnitPoint& u) { return truth.density(u); };
    const std::size_t n_mc = 200000;
    const auto d_sel = l1_distance(c, [&](const UnitPoint& u) { return q.density(u); }, 2, n_mc, 7);
    const auto d_one = l1_distance(c, [&](const UnitPoint& u) { return q1.density(u); }, 2, n_mc, 7);
    const double se = std::hypot(d_sel.std_error, d_one.std_error);
    o.detail << "L1 selected=" << d_sel.estimate << " L1 R=1=" << d_one.estimate << " combined se=" << se << ' ';
    o.check(d_one.estimate - d_sel.estimate >= 3.0 * se, "L1 improvement >= 3 se");
}

void parameter_counts(Outcome& o) {
    const std::size_t m = 7;
    for (std::size_t r = 1; r <= 4; ++r) {
        const std::size_t i_expected = r * m * (m - 1) / 2 + r - 1;
        const std::size_t ii_expected = r * m * (m + 3) / 2 + r - 1 - 2 * m;
        const std::size_t i_got = param_count(MixtureKind::MixtureI, m, r);
        const std::size_t ii_got = param_count(MixtureKind::MixtureII, m, r);
        o.detail << "R=" << r << ':' << i_got << '/' << ii_got << ' ';
        o.check(i_got == i_expected && ii_got == ii_expected, "counts at R=" + std::to_string(r));
    }
    o.check(param_count(MixtureKind::MixtureI, m, 1) == 21, "MixtureI R=1 is 21");
}

void radial_invariance(Outcome& o) {
    Rng rng(88);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(trial % 3);
        std::vector<GaussianCopula> comps;
        std::vector<double> w;
        for (int r = 0; r < 3; ++r) {
            comps.emplace_back(CorrelationMatrix(random_correlation(m, rng)));
            w.push_back(0.1 + rng.uniform());
        }
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (double& x : w) x /= total;
        w.back() = 1.0 - w[0] - w[1];
        const GaussianCopulaMixture mix(w, comps);
        for (int k = 0; k < 100; ++k) {
            const UnitPoint u = random_point(m, rng);
            worst = std::max(worst, std::fabs(mix.density(u) - mix.density(radial_reflection(u))));
        }
    }
    o.detail << "max symmetric gap=" << worst << ' ';
    o.check(worst < 1e-10, "mixtures symmetric within 1e-10");

    Eigen::MatrixXd s1(2, 2);
    s1 << 1.0, 0.8, 0.8, 1.0;
    Eigen::MatrixXd s2(2, 2);
    s2 << 1.0, -0.3, -0.3, 1.0;
    const GaussianMixtureModel shifted({0.3, 0.7}, {Eigen::Vector2d(-2.0, 1.0), Eigen::Vector2d(1.5, -0.5)}, {s1, s2},
                                       CovarianceMode::Full);
    const QRDensity c = QRDensity::copula_of(shifted);
    const auto gap = radial_symmetry_gap([&](const UnitPoint& u) { return c.density(u); }, midpoint_grid(33, 2));
    o.detail << "shifted-mean gap=" << gap.eta << ' ';
    o.check(gap.eta > 1e-3, "shifted-mean control > 1e-3");
}

void marginal_contraction(Outcome& o) {
    Rng rng(2718);
    double margin_min = 1e300;
    for (int trial = 0; trial < 20; ++trial) {
        const GaussianMixtureModel f = random_gmm(2, 1 + static_cast<std::size_t>(trial % 3), rng);
        const GaussianMixtureModel g = random_gmm(2, 1 + static_cast<std::size_t>((trial + 1) % 4), rng);
        const std::size_t n = 50000;
        Rng draws(5000 + static_cast<std::uint64_t>(trial));
        const Eigen::MatrixXd xf = f.sample(n, draws);
        const Eigen::MatrixXd xg = g.sample(n, draws);
        // Importance sampling from (f + g) / 2 for both integrals.
        double sj = 0.0, sj2 = 0.0, sm = 0.0, sm2 = 0.0;
        for (std::size_t k = 0; k < 2 * n; ++k) {
            const Eigen::RowVectorXd x = k < n ? xf.row(static_cast<Eigen::Index>(k)) : xg.row(static_cast<Eigen::Index>(k - n));
            const std::vector<double> xv{x[0], x[1]};
            const double a = f.density(xv);
            const double b = g.density(xv);
            const double vj = 2.0 * std::fabs(a - b) / (a + b);
            const double ma = std::exp(f.marginal_log_density(0, x[0]));
            const double mb = std::exp(g.marginal_log_density(0, x[0]));
            const double vm = 2.0 * std::fabs(ma - mb) / (ma + mb);
            sj += vj;
            sj2 += vj * vj;
            sm += vm;
            sm2 += vm * vm;
        }
        const double nn = 2.0 * static_cast<double>(n);
        const double joint = sj / nn;
        const double marg = sm / nn;
        const double se = std::sqrt((sj2 / nn - joint * joint) / nn + (sm2 / nn - marg * marg) / nn);
        margin_min = std::min(margin_min, (joint - marg) / se);
        o.check(joint >= marg - 3.0 * se, "trial " + std::to_string(trial));
    }
    o.detail << "min (joint - marginal)/se=" << margin_min << ' ';
}

void archimedean_exchangeability(Outcome& o) {
    Rng rng(404);
    const std::vector<std::pair<ArchimedeanFamily, double>> fams{{ArchimedeanFamily::Clayton, 2.0},
                                                                 {ArchimedeanFamily::AliMikhailHaq, 0.7},
                                                                 {ArchimedeanFamily::Gumbel, 1.8},
                                                                 {ArchimedeanFamily::Frank, 6.0}};
    double worst = 0.0;
    for (const auto& [fam, theta] : fams) {
        const ArchimedeanGenerator g(fam, theta);
        for (int k = 0; k < 500; ++k) {
            std::vector<double> u{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
            const double base = archimedean_cdf(g, u);
            std::sort(u.begin(), u.end());
            do {
                worst = std::max(worst, std::fabs(archimedean_cdf(g, u) - base));
            } while (std::next_permutation(u.begin(), u.end()));
        }
    }
    o.detail << "max permutation difference=" << worst << ' ';
    o.check(worst <= 1e-12, "exchangeable to 1e-12");
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Clayton radial symmetry gap", 1.0, clayton_radial_gap},
        {2, "example copula exchangeability gaps", 1.0, example_exchange_gaps},
        {3, "q_R identity", 1.0, qr_identity},
        {4, "Kimberling sampler for Clayton", 10.0, kimberling_clayton},
        {5, "example copula conditional sampler", 30.0, example_sampler},
        {6, "mixture-margin replication with BIC selection", 300.0, replication},
        {7, "parameter counts at M=7", 1.0, parameter_counts},
        {8, "radial symmetry of Gaussian copula mixtures", 10.0, radial_invariance},
        {9, "joint L1 dominates marginal L1", 60.0, marginal_contraction},
        {10, "exchangeability of Archimedean cdfs", 5.0, archimedean_exchangeability},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.check(secs <= c.budget_seconds, "runtime budget");
        if (!o.pass) ++failures;
        std::printf("%s %d %s: %s(%.2f s of %.0f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    o.detail.str().c_str(), secs, c.budget_seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
