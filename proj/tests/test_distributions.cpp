#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bussgang/distributions.hpp"

using namespace bussgang;
using Catch::Approx;

namespace {

/// Composite-Simpson integration split at the integrand's non-smooth points.
double integrate_piecewise(const std::function<double(double)>& f, double lo, double hi,
                           std::vector<double> splits, int points_per_piece = 16385) {
    splits.push_back(lo);
    splits.push_back(hi);
    std::sort(splits.begin(), splits.end());
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < splits.size(); ++s) {
        const double a = std::max(lo, splits[s]);
        const double b = std::min(hi, splits[s + 1]);
        if (!(b > a)) {
            continue;
        }
        const int n = points_per_piece | 1;  // odd count for Simpson
        const double h = (b - a) / (n - 1);
        // One-sided limits at the edges: the splits sit exactly on the
        // integrand's jumps, and Simpson must not sample the wrong side.
        const double nudge = 1e-9 * (b - a);
        double acc = f(a + nudge) + f(b - nudge);
        for (int i = 1; i + 1 < n; ++i) {
            acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
        }
        total += acc * h / 3.0;
    }
    return total;
}

std::vector<double> pdf_splits(const ScalarDistribution& d) {
    const double sigma = std::sqrt(d.variance());
    switch (d.kind()) {
        case ScalarDistribution::Kind::laplace:
            return {0.0};
        case ScalarDistribution::Kind::uniform:
            return {-std::sqrt(3.0) * sigma, std::sqrt(3.0) * sigma};
        case ScalarDistribution::Kind::triangular:
            return {-std::sqrt(6.0) * sigma, 0.0, std::sqrt(6.0) * sigma};
        default:
            return {};
    }
}

double sample_variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_CASE("class-a expansion matches the canonical formulas", "[distributions]") {
    ClassAParams params;
    params.impulsive_index = 0.01;
    params.gamma = 0.01;
    params.total_variance = 1.0;
    const MixtureSpec mix = class_a_mixture(params);

    // Poisson head term and the l=0 variance, evaluated directly.
    CHECK(mix.weight(0) == Approx(std::exp(-0.01)).epsilon(1e-9));
    CHECK(mix.variance(0) == Approx(0.01 / 1.01).epsilon(1e-14));
    CHECK(mix.variance(1) == Approx((1.0 / 0.01 + 0.01) / 1.01).epsilon(1e-14));
    CHECK(mix.total_variance() == Approx(1.0).margin(1e-9));

    double mass = 0.0;
    for (double w : mix.weights()) {
        mass += w;
    }
    CHECK(mass == Approx(1.0).margin(1e-14));

    SECTION("renormalization holds for other parameter points") {
        for (double a : {1.0, 10.0, 100.0}) {
            ClassAParams p{a, 0.1, 2.5, 1e-12};
            CHECK(class_a_mixture(p).total_variance() == Approx(2.5).margin(1e-9 * 2.5));
        }
    }

    SECTION("unreachable truncation fails loudly") {
        ClassAParams bad{1e9, 0.01, 1.0, 1e-12};
        CHECK_THROWS_AS(class_a_mixture(bad), std::runtime_error);
    }

    SECTION("parameter validation") {
        CHECK_THROWS_AS(class_a_mixture(ClassAParams{-1.0, 0.01, 1.0, 1e-12}),
                        std::invalid_argument);
        CHECK_THROWS_AS(class_a_mixture(ClassAParams{0.01, 0.0, 1.0, 1e-12}),
                        std::invalid_argument);
    }
}

TEST_CASE("mixture spec invariants", "[distributions]") {
    CHECK_THROWS_AS(MixtureSpec({0.5, 0.4}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(MixtureSpec({0.5, 0.5}, {1.0, -2.0}), std::invalid_argument);
    CHECK_THROWS_AS(MixtureSpec({1.2, -0.2}, {1.0, 2.0}), std::invalid_argument);
    const MixtureSpec ok({0.25, 0.75}, {1.0, 3.0});
    CHECK(ok.total_variance() == Approx(0.25 + 2.25));
}

TEST_CASE("pdf closed forms and normalization", "[distributions]") {
    CHECK(ScalarDistribution::gaussian(1.0).pdf(0.0) ==
          Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));

    // Single-component mixture is the plain Gaussian.
    const ScalarDistribution single = ScalarDistribution::mixture(MixtureSpec({1.0}, {4.0}));
    CHECK(single.pdf(0.0) == Approx(gaussian_pdf(0.0, 4.0)).epsilon(1e-14));
    CHECK(single.pdf(1.3) == Approx(gaussian_pdf(1.3, 4.0)).epsilon(1e-14));

    const double variances[] = {0.5, 1.0, 7.3};
    for (double v : variances) {
        for (auto make : {&ScalarDistribution::gaussian, &ScalarDistribution::laplace,
                          &ScalarDistribution::uniform, &ScalarDistribution::triangular}) {
            const ScalarDistribution d = make(v);
            const double sigma = std::sqrt(v);
            const double mass = integrate_piecewise([&d](double x) { return d.pdf(x); },
                                                    -16.0 * sigma, 16.0 * sigma, pdf_splits(d));
            const double second = integrate_piecewise(
                [&d](double x) { return x * x * d.pdf(x); }, -16.0 * sigma, 16.0 * sigma,
                pdf_splits(d));
            CHECK(mass == Approx(1.0).margin(1e-8));
            CHECK(second == Approx(v).margin(1e-6 * v));
        }
    }
}

TEST_CASE("triangular pdf equals the self-convolution of its uniform half",
          "[distributions]") {
    const double variance = 2.3;
    const ScalarDistribution tri = ScalarDistribution::triangular(variance);
    const ScalarDistribution half = ScalarDistribution::uniform(variance / 2.0);
    // Discrete convolution oracle on a fine grid.
    const double h = std::sqrt(3.0 * variance / 2.0);  // uniform half-width
    const int n = 400001;
    const double dt = 2.0 * h / (n - 1);
    for (double x : {0.0, 0.31, -1.4, h, 1.9 * h}) {
        double conv = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = -h + i * dt;
            conv += half.pdf(t) * half.pdf(x - t);
        }
        conv *= dt;
        CHECK(tri.pdf(x) == Approx(conv).margin(1e-6));
    }
}

TEST_CASE("characteristic functions", "[distributions]") {
    const double variance = 3.7;
    const std::vector<ScalarDistribution> all = {
        ScalarDistribution::gaussian(variance),
        ScalarDistribution::mixture(MixtureSpec({0.8, 0.2}, {1.0, 9.0})),
        ScalarDistribution::laplace(variance),
        ScalarDistribution::uniform(variance),
        ScalarDistribution::triangular(variance),
    };

    SECTION("C(0) = 1 and |C| <= 1") {
        for (const auto& d : all) {
            CHECK(d.char_function(0.0).real() == Approx(1.0).margin(1e-14));
            CHECK(d.char_function(0.0).imag() == Approx(0.0).margin(1e-14));
            for (int i = -40; i <= 40; ++i) {
                const double u = i * 0.05 / std::sqrt(d.variance());
                CHECK(std::abs(d.char_function(u)) <= 1.0 + 1e-12);
            }
        }
    }

    SECTION("gaussian closed form") {
        const double sigma = std::sqrt(variance);
        for (double u : {0.05, 0.21, 0.4}) {
            const double expected =
                std::exp(-2.0 * std::pow(std::numbers::pi * sigma * u, 2));
            CHECK(all[0].char_function(u).real() == Approx(expected).epsilon(1e-13));
        }
    }

    SECTION("mixture is the weight-average of component CFs") {
        for (double u : {0.07, 0.19}) {
            const double expected =
                0.8 * ScalarDistribution::gaussian(1.0).char_function(u).real() +
                0.2 * ScalarDistribution::gaussian(9.0).char_function(u).real();
            CHECK(all[1].char_function(u).real() == Approx(expected).epsilon(1e-13));
        }
    }

    SECTION("CF equals the Fourier integral of the pdf") {
        // Independent route: numerically integrate pdf(x) cos(2 pi u x).
        for (const auto& d : all) {
            const double sigma = std::sqrt(d.variance());
            for (double scale : {0.1, 0.3}) {
                const double u = scale / sigma;
                const double numeric = integrate_piecewise(
                    [&d, u](double x) {
                        return d.pdf(x) * std::cos(2.0 * std::numbers::pi * u * x);
                    },
                    -16.0 * sigma, 16.0 * sigma, pdf_splits(d));
                CHECK(d.char_function(u).real() == Approx(numeric).margin(2e-8));
            }
        }
    }

    SECTION("triangular CF is the squared uniform CF (convolution <-> product)") {
        const double v = 1.9;
        const ScalarDistribution u_half = ScalarDistribution::uniform(v);
        const ScalarDistribution t = ScalarDistribution::triangular(2.0 * v);
        for (int i = 0; i <= 32; ++i) {
            const double u = i * 0.02;
            const double cu = u_half.char_function(u).real();
            CHECK(t.char_function(u).real() == Approx(cu * cu).margin(1e-12));
        }
    }
}

TEST_CASE("sampling is consistent and deterministic", "[distributions]") {
    SECTION("gaussian sample variance within 5 standard errors") {
        const auto v = ScalarDistribution::gaussian(10.0).sample(1000000, 123);
        const double se = 10.0 * std::sqrt(2.0 / (1e6 - 1.0));
        CHECK(std::abs(sample_variance(v) - 10.0) < 5.0 * se);
    }

    SECTION("every law matches its variance at 10^6 samples") {
        int seed = 500;
        for (auto make : {&ScalarDistribution::laplace, &ScalarDistribution::uniform,
                          &ScalarDistribution::triangular}) {
            const ScalarDistribution d = make(2.0);
            const auto v = d.sample(1000000, static_cast<std::uint64_t>(seed++));
            // 5 SE with the law's own fourth moment would be tighter; the
            // Gaussian-based bound is conservative enough here.
            CHECK(std::abs(sample_variance(v) - 2.0) < 5.0 * 2.0 * std::sqrt(3.0 / 1e6));
        }
    }

    SECTION("class-a samples are impulsive: kurtosis near the mixture formula") {
        ClassAParams params{0.01, 0.01, 1.0, 1e-12};
        const MixtureSpec mix = class_a_mixture(params);
        double fourth = 0.0;
        for (std::size_t l = 0; l < mix.size(); ++l) {
            fourth += mix.weight(l) * 3.0 * mix.variance(l) * mix.variance(l);
        }
        const double kurtosis_theory =
            fourth / (mix.total_variance() * mix.total_variance());
        REQUIRE(kurtosis_theory > 100.0);  // violently non-Gaussian

        const auto v = ScalarDistribution::mixture(mix).sample(1000000, 77);
        double m2 = 0.0;
        double m4 = 0.0;
        for (double x : v) {
            m2 += x * x;
            m4 += x * x * x * x;
        }
        m2 /= static_cast<double>(v.size());
        m4 /= static_cast<double>(v.size());
        const double kurtosis = m4 / (m2 * m2);
        CHECK(kurtosis > 50.0);
        CHECK(kurtosis == Approx(kurtosis_theory).epsilon(0.5));
    }

    SECTION("same seed gives identical vectors; serial equals parallel bitwise") {
        const ScalarDistribution d =
            ScalarDistribution::mixture(MixtureSpec({0.7, 0.3}, {1.0, 16.0}));
        const auto a = d.sample(200001, 9, Exec::parallel);
        const auto b = d.sample(200001, 9, Exec::parallel);
        const auto c = d.sample(200001, 9, Exec::serial);
        REQUIRE(a == b);
        REQUIRE(a == c);
    }
}

TEST_CASE("sum of independent variables: empirical CF equals the CF product",
          "[distributions]") {
    const ScalarDistribution x = ScalarDistribution::gaussian(2.0);
    const ScalarDistribution n = ScalarDistribution::laplace(1.0);
    const std::int64_t count = 200000;
    const auto xs = x.sample(count, 21);
    const auto ns = n.sample(count, 22);
    const double se = 1.0 / std::sqrt(static_cast<double>(count));
    for (int i = 0; i < 64; ++i) {
        const double u = -0.75 + 1.5 * i / 63.0;
        std::complex<double> ecf{0.0, 0.0};
        for (std::int64_t k = 0; k < count; ++k) {
            const double arg = 2.0 * std::numbers::pi * u * (xs[k] + ns[k]);
            ecf += std::complex<double>{std::cos(arg), std::sin(arg)};
        }
        ecf /= static_cast<double>(count);
        const std::complex<double> expected = x.char_function(u) * n.char_function(u);
        CHECK(std::abs(ecf - expected) < 5.0 * se);
    }
}

TEST_CASE("class-a approaches a single gaussian as the impulsive index grows",
          "[distributions]") {
    double previous = 1e300;
    for (double a : {1.0, 10.0, 100.0}) {
        const MixtureSpec mix = class_a_mixture(ClassAParams{a, 0.5, 1.0, 1e-12});
        double spread = 0.0;
        for (std::size_t l = 0; l < mix.size(); ++l) {
            spread = std::max(spread, mix.weight(l) * std::abs(mix.variance(l) - 1.0));
        }
        CHECK(spread < previous);
        previous = spread;
    }
}

TEST_CASE("grid characteristic-function evaluation matches pointwise calls",
          "[distributions]") {
    const ScalarDistribution d = ScalarDistribution::laplace(2.0);
    const std::vector<double> grid = {-0.4, -0.1, 0.0, 0.2, 0.5};
    const auto values = d.char_function(std::span<const double>(grid));
    REQUIRE(values.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(values[i] == d.char_function(grid[i]));
    }
}
