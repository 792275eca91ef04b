#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "copmix/errors.hpp"
#include "copmix/marginal.hpp"
#include "copmix/normal_dist.hpp"
#include "copmix/numeric.hpp"
#include "copmix/reference_copulas.hpp"
#include "copmix/rng.hpp"
#include "copmix/unit_point.hpp"
#include "oracles.hpp"

using namespace copmix;
using Catch::Approx;

TEST_CASE("normal cdf agrees with the series oracle", "[normal]") {
    for (double x = -6.0; x <= 6.0; x += 0.125) {
        const double expected = static_cast<double>(oracle::normal_cdf(x));
        REQUIRE(std::fabs(normal::cdf(x) - expected) < 1e-15 + 1e-13 * expected);
    }
}

TEST_CASE("normal quantile agrees with bisection on the oracle", "[normal]") {
    for (double p : {1e-9, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97575, 0.999, 1 - 1e-6}) {
        const double expected = static_cast<double>(oracle::normal_quantile(p));
        REQUIRE(std::fabs(normal::quantile(p) - expected) < 1e-12 * std::max(1.0, std::fabs(expected)));
    }
    REQUIRE_THROWS_AS(normal::quantile(0.0), DomainError);
    REQUIRE_THROWS_AS(normal::quantile(1.0), DomainError);
}

TEST_CASE("UnitPoint rejects closed-cube coordinates", "[unit_point]") {
    REQUIRE_THROWS_AS(UnitPoint({0.0, 0.5}), DomainError);
    REQUIRE_THROWS_AS(UnitPoint({0.5, 1.0}), DomainError);
    REQUIRE_THROWS_AS(UnitPoint(std::vector<double>{}), DomainError);
    const UnitPoint u{0.3, 0.7};
    REQUIRE(u.dim() == 2);
    const std::vector<double> raw{0.0, 1.0};
    const UnitPoint c = UnitPoint::clamped(raw);
    REQUIRE(c[0] == 1e-12);
    REQUIRE(c[1] == 1.0 - 1e-12);
}

TEST_CASE("radial reflection and permutation", "[unit_point]") {
    const UnitPoint u{0.3, 0.7};
    REQUIRE(radial_reflection(u)[0] == Approx(0.7).margin(1e-15));
    REQUIRE(radial_reflection(u)[1] == Approx(0.3).margin(1e-15));
    const UnitPoint twice = radial_reflection(radial_reflection(u));
    REQUIRE(twice[0] == Approx(u[0]).margin(1e-15));
    REQUIRE(twice[1] == Approx(u[1]).margin(1e-15));
    const UnitPoint mid{0.5, 0.5, 0.5};
    REQUIRE(radial_reflection(mid) == mid);
    const std::vector<std::size_t> swap{1, 0};
    REQUIRE(permute(u, swap) == UnitPoint{0.7, 0.3});
    const std::vector<std::size_t> bad{0, 0};
    REQUIRE_THROWS_AS(permute(u, bad), DomainError);
}

TEST_CASE("forward transform", "[transform]") {
    const auto t = MarginalTransform::standard_normal(2);
    const std::vector<double> zero{0.0, 0.0};
    const UnitPoint u = t.forward(zero);
    REQUIRE(u[0] == 0.5);
    REQUIRE(u[1] == 0.5);

    const auto t1 = MarginalTransform::standard_normal(1);
    const std::vector<double> x{1.6448536};
    const double expected = static_cast<double>(oracle::normal_cdf(1.6448536L));
    REQUIRE(t1.forward(x)[0] == Approx(expected).margin(1e-12));
    REQUIRE(t1.forward(x)[0] == Approx(0.95).margin(1e-6));

    const std::vector<double> wrong{0.0, 0.0, 0.0};
    REQUIRE_THROWS_AS(t.forward(wrong), DomainError);
    const std::vector<double> inf{0.0, INFINITY};
    REQUIRE_THROWS_AS(t.forward(inf), DomainError);
}

TEST_CASE("inverse transform", "[transform]") {
    const auto t = MarginalTransform::standard_normal(3);
    for (double z : t.inverse(UnitPoint{0.5, 0.5, 0.5})) REQUIRE(z == 0.0);

    const auto t1 = MarginalTransform::standard_normal(1);
    const double expected = static_cast<double>(oracle::normal_quantile(0.975L));
    REQUIRE(t1.inverse(UnitPoint{0.975})[0] == Approx(expected).margin(1e-12));
    REQUIRE(t1.inverse(UnitPoint{0.975})[0] == Approx(1.959964).margin(1e-5));

    const auto tl = MarginalTransform::logistic(2);
    for (double z : tl.inverse(UnitPoint{0.5, 0.5})) REQUIRE(z == Approx(0.0).margin(1e-15));
}

TEST_CASE("transform round trip", "[transform]") {
    for (const char* id : {"normal", "logistic"}) {
        const auto t = MarginalTransform::named(id, 2);
        for (int i = 1; i < 200; ++i) {
            for (double v : {1e-9, 0.37}) {
                const UnitPoint u{i / 200.0, v};
                const UnitPoint back = t.forward(t.inverse(u));
                REQUIRE(std::fabs(back[0] - u[0]) < 1e-10);
                REQUIRE(std::fabs(back[1] - u[1]) < 1e-10);
            }
        }
    }
}

TEST_CASE("marginal quantile round trip on a grid", "[transform]") {
    const NormalMarginal n(0.0, 1.0);
    const LogisticMarginal l(0.0, 1.0);
    const NormalMixtureMarginal mix({0.25, 0.75}, {-3.0, 2.0}, {0.5, 1.5});
    for (int i = 1; i < 1000; ++i) {
        const double u = i / 1000.0;
        REQUIRE(std::fabs(n.cdf(n.quantile(u)) - u) <= 1e-12);
        REQUIRE(std::fabs(l.cdf(l.quantile(u)) - u) <= 1e-12);
        REQUIRE(std::fabs(mix.cdf(mix.quantile(u)) - u) <= 1e-12);
    }
}

TEST_CASE("normal mixture marginal density integrates to one", "[transform]") {
    const NormalMixtureMarginal mix({1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6},
                                    {-9, -5.4, -1.8, 1.8, 5.4, 9}, std::vector<double>(6, 1 / std::sqrt(10.0)));
    const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return mix.pdf(x); }, -20.0, 20.0, 15, 1e-12);
    REQUIRE(total == Approx(1.0).margin(1e-9));
}

TEST_CASE("empirical cdf", "[empirical]") {
    const std::vector<double> s{1.0, 2.0, 3.0};
    const EmpiricalCdf f(s);
    REQUIRE(f.cdf(2.0) == 0.5);
    REQUIRE(f.cdf(-100.0) >= 0.25);
    REQUIRE(f.cdf(-100.0) > 0.0);
    REQUIRE(f.cdf(100.0) <= 0.75);
    REQUIRE(f.cdf(100.0) < 1.0);
    REQUIRE(f.cdf(1.5) == Approx(0.375));
    REQUIRE_THROWS_AS(EmpiricalCdf(std::vector<double>{4.0, 4.0, 4.0}), DomainError);
    REQUIRE_THROWS_AS(EmpiricalCdf(std::vector<double>{}), DomainError);

    Rng rng(3);
    std::vector<double> big(500);
    for (auto& x : big) x = rng.normal();
    const EmpiricalCdf g(big);
    for (double x = -10; x <= 10; x += 0.01) {
        REQUIRE(g.cdf(x) > 0.0);
        REQUIRE(g.cdf(x) < 1.0);
    }
}

TEST_CASE("example copula boundary identities", "[example]") {
    for (auto [a, b, t] : {std::tuple{0.75, 0.5, 20.0}, std::tuple{0.25, 0.5, 20.0}, std::tuple{0.3, 0.9, 2.0}}) {
        const ExampleCopula c(a, b, t);
        for (int i = 1; i <= 25; ++i) {
            const double u = i / 26.0;
            REQUIRE(std::fabs(c.cdf(u, 1.0) - u) < 1e-12);
            REQUIRE(std::fabs(c.cdf(1.0, u) - u) < 1e-12);
            REQUIRE(c.cdf(u, 0.0) == 0.0);
        }
    }
}

TEST_CASE("example copula parameter contract", "[example]") {
    REQUIRE_THROWS_AS(ExampleCopula(0.5, 0.5, 0.0), DomainError);
    REQUIRE_THROWS_AS(ExampleCopula(0.0, 0.5, 1.0), DomainError);
    REQUIRE_THROWS_AS(ExampleCopula(0.5, 1.0, 1.0), DomainError);
    const ExampleCopula c(0.75, 0.5, 20.0);
    REQUIRE_THROWS_AS(c.density(0.0, 0.5), DomainError);
    REQUIRE_THROWS_AS(c.cdf(1.5, 0.5), DomainError);
}

TEST_CASE("example copula cdf matches the long double oracle", "[example]") {
    const ExampleCopula c(0.75, 0.5, 20.0);
    // 50-digit evaluation of the closed form at (1/2, 1/2).
    REQUIRE(c.cdf(0.5, 0.5) == Approx(0.35301035997400455821975983859993).epsilon(1e-14));
    for (int i = 1; i < 20; ++i) {
        for (int j = 1; j < 20; ++j) {
            const double u = i / 20.0;
            const double v = j / 20.0;
            const double expected = static_cast<double>(oracle::example_cdf(u, v, 0.75L, 0.5L, 20.0L));
            REQUIRE(c.cdf(u, v) == Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("example copula cdf is monotone", "[example]") {
    const ExampleCopula c(0.25, 0.5, 20.0);
    for (int j = 1; j < 40; ++j) {
        double prev_u = 0.0;
        double prev_v = 0.0;
        for (int i = 1; i < 40; ++i) {
            const double cu = c.cdf(i / 40.0, j / 40.0);
            const double cv = c.cdf(j / 40.0, i / 40.0);
            REQUIRE(cu >= prev_u);
            REQUIRE(cv >= prev_v);
            prev_u = cu;
            prev_v = cv;
        }
    }
}

TEST_CASE("example copula cdf asymmetry at alpha 1/4, beta 1/2", "[example]") {
    const ExampleCopula c(0.25, 0.5, 20.0);
    const double gap = std::fabs(c.cdf(1.0 / 3, 2.0 / 3) - c.cdf(2.0 / 3, 1.0 / 3));
    // 50-digit values 0.269328074073266663 and 0.245927942475559652.
    REQUIRE(gap == Approx(0.0234001315977070116).epsilon(1e-12));
}

TEST_CASE("example copula density matches mixed differences of the cdf", "[example]") {
    const ExampleCopula c(0.75, 0.5, 20.0);
    auto cdf = [](long double u, long double v) { return oracle::example_cdf(u, v, 0.75L, 0.5L, 20.0L); };
    const double fd = static_cast<double>(oracle::mixed_difference(cdf, 0.25L, 0.75L, 1e-5L));
    REQUIRE(std::fabs(c.density(0.25, 0.75) - fd) < 1e-5);
    // 50-digit differentiation of the closed form.
    REQUIRE(c.density(0.25, 0.75) == Approx(0.57735041475421221375617288701088).epsilon(1e-13));

    const ExampleCopula p(0.25, 0.5, 20.0);
    REQUIRE(std::fabs(p.density(1.0 / 3, 2.0 / 3) - p.density(2.0 / 3, 1.0 / 3)) > 0.3);
}

TEST_CASE("density and cdf are consistent at random interior points", "[example][clayton]") {
    Rng rng(11);
    const ExampleCopula e(0.75, 0.5, 20.0);
    const ClaytonCopula cl(1.0, 2);
    auto ecdf = [&](std::span<const double> x) { return e.cdf(x[0], x[1]); };
    auto ccdf = [&](std::span<const double> x) { return cl.cdf(x); };
    for (int k = 0; k < 100; ++k) {
        const double u = 0.02 + 0.96 * rng.uniform();
        const double v = 0.02 + 0.96 * rng.uniform();
        const std::vector<double> x{u, v};
        REQUIRE(std::fabs(mixed_partial(ecdf, x) - e.density(u, v)) < 1e-4);
        REQUIRE(std::fabs(mixed_partial(ccdf, x) - cl.density(UnitPoint{u, v})) < 1e-4);
    }
}

TEST_CASE("example copula density integrates to one", "[example]") {
    const ExampleCopula c(0.75, 0.5, 20.0);
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double total = gk::integrate(
        [&](double u) {
            return gk::integrate([&](double v) { return c.density(u, v); }, 1e-12, 1.0 - 1e-12, 12, 1e-9);
        },
        1e-12, 1.0 - 1e-12, 12, 1e-8);
    REQUIRE(total == Approx(1.0).margin(1e-3));
}

TEST_CASE("example copula conditional cdf", "[example]") {
    const ExampleCopula c(0.75, 0.5, 20.0);
    auto cdf = [](long double u, long double v) { return oracle::example_cdf(u, v, 0.75L, 0.5L, 20.0L); };
    for (double u : {0.1, 0.4, 0.8}) {
        for (double v : {0.2, 0.5, 0.9}) {
            const long double h = 1e-6L;
            const double expected = static_cast<double>((cdf(u, v + h) - cdf(u, v - h)) / (2 * h));
            REQUIRE(c.conditional_cdf(u, v) == Approx(expected).margin(1e-8));
            const double w = c.conditional_cdf(u, v);
            REQUIRE(c.conditional_quantile(w, v) == Approx(u).margin(1e-9));
        }
        REQUIRE(c.conditional_cdf(1.0, 0.3) == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("clayton cdf", "[clayton]") {
    REQUIRE(ClaytonCopula(1.0, 2).cdf(UnitPoint{0.5, 0.5}) == Approx(1.0 / 3).epsilon(1e-15));
    REQUIRE(ClaytonCopula(2.0, 3).cdf(UnitPoint{0.5, 0.5, 0.5}) == Approx(1.0 / std::sqrt(10.0)).epsilon(1e-15));
    const std::vector<double> ones{1.0, 1.0, 1.0};
    REQUIRE(ClaytonCopula(2.0, 3).cdf(ones) == 1.0);
    const ClaytonCopula c(3.0, 3);
    for (int i = 1; i <= 25; ++i) {
        const double u = i / 26.0;
        const std::vector<double> x{1.0, u, 1.0};
        REQUIRE(std::fabs(c.cdf(x) - u) < 1e-10);
    }
}

TEST_CASE("clayton density", "[clayton]") {
    const ClaytonCopula c(1.0, 2);
    REQUIRE(c.density(UnitPoint{0.1, 0.5}) == Approx(0.601051840721262).epsilon(1e-12));
    // 0.9 / 0.95^3 = 1.0497157019973757...
    REQUIRE(c.density(UnitPoint{0.9, 0.5}) == Approx(0.9 / (0.95 * 0.95 * 0.95)).epsilon(1e-14));
    REQUIRE(c.density(UnitPoint{0.9, 0.5}) == Approx(1.0497157).margin(1e-7));
    for (int i = 1; i < 30; ++i) {
        for (int j = 1; j < 30; ++j) {
            const double u = i / 30.0;
            const double v = j / 30.0;
            REQUIRE(std::fabs(c.density(UnitPoint{u, v}) - oracle::clayton1_density(u, v)) <
                    1e-12 * oracle::clayton1_density(u, v));
        }
    }
    REQUIRE(std::fabs(c.density(UnitPoint{0.1, 0.5}) - c.density(UnitPoint{0.9, 0.5})) > 0.4);
}

// The boundary-aware step gives rounding error of order eps / h^3 in three
// dimensions, so agreement is only to about 1e-3 there.
TEST_CASE("clayton density in three dimensions matches nested differences", "[clayton]") {
    const ClaytonCopula c(2.0, 3);
    auto cdf = [&](std::span<const double> x) { return c.cdf(x); };
    for (const auto& p : {std::vector<double>{0.3, 0.5, 0.7}, std::vector<double>{0.6, 0.2, 0.4}}) {
        const double fd = mixed_partial(cdf, p);
        REQUIRE(c.density(UnitPoint(p)) == Approx(fd).epsilon(2e-3));
    }
}

TEST_CASE("bisection and log-sum-exp helpers", "[numeric]") {
    const double r = bisect_increasing([](double x) { return x * x * x; }, 0.125, 0.0, 1.0);
    REQUIRE(r == Approx(0.5).margin(1e-12));
    const std::vector<double> v{-1000.0, -1000.0};
    REQUIRE(log_sum_exp(v) == Approx(-1000.0 + std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("normal quantile stays finite for subnormal probabilities", "[normal]") {
    double prev = normal::quantile(1e-300);
    for (double p : {1e-310, 1e-320, 4.9406564584124654e-324}) {
        const double x = normal::quantile(p);
        REQUIRE(std::isfinite(x));
        REQUIRE(x < prev);
        prev = x;
    }
}
