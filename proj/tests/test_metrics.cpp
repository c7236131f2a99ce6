#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bussgang/metrics.hpp"

using namespace bussgang;
using Catch::Approx;

namespace {

MixtureSpec class_a_001() {
    return class_a_mixture(ClassAParams{0.01, 0.01, 1.0, 1e-12});
}

MetricSet metrics_for(const Scenario& s, std::uint64_t seed = 9,
                      std::int64_t samples = 400000) {
    McSettings mc;
    mc.seed = seed;
    mc.n_samples = samples;
    const auto analytic = analytic_gains(s);
    const GainSet gains = analytic ? *analytic : gains_empirical(s, mc);
    return metric_set(s, gains, {}, mc);
}

void check_snr_mse_link(const MetricSet& m) {
    // SNR_x (MSE - (1 - k_x)^2 sigma_x^2) = k_x^2 sigma_x^2.
    if (m.degenerate_kx) {
        return;
    }
    const double lhs = m.snr_x * (m.mse - (1.0 - m.k_x) * (1.0 - m.k_x) * m.sigma_x2);
    const double rhs = m.k_x * m.k_x * m.sigma_x2;
    CHECK(lhs == Approx(rhs).epsilon(1e-9));
}

}  // namespace

TEST_CASE("identity channel metrics", "[metrics]") {
    const Scenario s(ScalarDistribution::gaussian(4.0), ScalarDistribution::gaussian(2.0), 0.0,
                     Identity{});
    const MetricSet m = metrics_for(s);
    CHECK(m.analytic_e_g2);
    CHECK(m.snr_x == Approx(2.0).epsilon(1e-9));
    CHECK(m.snr_y == Approx(2.0).epsilon(1e-9));
    CHECK(m.mse == Approx(2.0).epsilon(1e-9));          // the raw noise power
    CHECK(m.mse_u == Approx(2.0).epsilon(1e-9));
    CHECK(m.residual_power_wx == Approx(2.0).epsilon(1e-9));
    CHECK(m.c_snr_x == Approx(0.5 * std::log(3.0)).epsilon(1e-9));
    CHECK(m.c_awgn == Approx(0.5 * std::log(3.0)).epsilon(1e-9));
    check_snr_mse_link(m);
}

TEST_CASE("wiener estimator reproduces the textbook MSE and AWGN capacity",
          "[metrics]") {
    const double px = 4.0;
    const double pn = 2.0;
    const MixtureSpec single({1.0}, {pn});
    const Scenario s(ScalarDistribution::gaussian(px), ScalarDistribution::gaussian(pn), 0.0,
                     mixture_mmse(px, single));
    const MetricSet m = metrics_for(s);
    const double wiener = px * pn / (px + pn);
    CHECK(m.mse == Approx(wiener).epsilon(1e-9));
    // All four capacity routes coincide on the linear-MMSE estimator.
    const double awgn = 0.5 * std::log(1.0 + px / pn);
    CHECK(m.c_snr_x == Approx(awgn).epsilon(1e-9));
    CHECK(m.c_snr_y == Approx(awgn).epsilon(1e-9));
    CHECK(m.c_mse == Approx(awgn).epsilon(1e-9));
    CHECK(m.c_awgn == Approx(awgn).epsilon(1e-9));
    check_snr_mse_link(m);
}

TEST_CASE("gaussian pair keeps SNR_x equal to SNR_y for any nonlinearity",
          "[metrics]") {
    for (const Nonlinearity& g :
         std::vector<Nonlinearity>{SoftLimiter{1.0}, Blanker{2.0}, Scale{0.4}}) {
        const Scenario s(ScalarDistribution::gaussian(6.0), ScalarDistribution::gaussian(4.0),
                         0.0, g);
        const MetricSet m = metrics_for(s);
        CHECK(m.snr_x == Approx(m.snr_y).epsilon(1e-9));
        check_snr_mse_link(m);
    }
}

TEST_CASE("SNR-MSE link holds across scenario families", "[metrics]") {
    std::vector<Scenario> scenarios;
    scenarios.emplace_back(ScalarDistribution::gaussian(1.0),
                           ScalarDistribution::mixture(class_a_001()), 0.0,
                           SoftLimiter{std::sqrt(2.0)});
    scenarios.emplace_back(ScalarDistribution::laplace(5.0), ScalarDistribution::laplace(5.0),
                           0.0, SoftLimiter{1.0});
    scenarios.emplace_back(ScalarDistribution::uniform(10.0 / 3.0),
                           ScalarDistribution::triangular(20.0 / 3.0), 0.0, SoftLimiter{1.0});
    scenarios.emplace_back(ScalarDistribution::gaussian(5.0), ScalarDistribution::gaussian(5.0),
                           0.3, SoftLimiter{1.0});
    int idx = 0;
    for (const Scenario& s : scenarios) {
        const MetricSet m = metrics_for(s, 100 + idx++);
        check_snr_mse_link(m);
        CHECK(m.residual_power_wx >= -1e-9);
        if (!m.degenerate_kx) {
            CHECK(m.c_snr_x >= m.c_mse);  // Theorem ordering on real scenarios
        }
    }
}

TEST_CASE("degenerate k_x is flagged, not infinite", "[metrics]") {
    const Scenario s(ScalarDistribution::gaussian(1.0), ScalarDistribution::gaussian(1.0), 0.0,
                     Scale{0.0});
    // Scale(0) zeroes the output: E{g^2} = 0 as well, so guard via gains == 0.
    GainSet gains;
    gains.k_x = {0.0, 0.0};
    gains.k_y = {0.0, 0.0};
    gains.k_n = {0.0, 0.0};
    const MetricSet m = metric_set(s, gains);
    CHECK(m.degenerate_kx);
    CHECK(std::isnan(m.snr_x));
    CHECK(std::isnan(m.mse_u));
    CHECK(std::isnan(m.c_snr_x));
    CHECK_FALSE(std::isnan(m.mse));  // MSE itself stays defined
}

TEST_CASE("capacity ordering holds on randomized triples", "[metrics]") {
    // 10^4 random (k_x, P_Wx, sigma_x^2): exact inequality, no tolerance.
    CounterRng rng(31337, StreamDomain::verify, 0);
    for (int i = 0; i < 10000; ++i) {
        const double k = -3.0 + 6.0 * rng.uniform();
        const double p_wx = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
        const double sx2 = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
        const double snr = k * k * sx2 / p_wx;
        const double mse = p_wx + (1.0 - k) * (1.0 - k) * sx2;
        REQUIRE((1.0 + snr) * mse >= sx2);
        // Useful-estimator bound: small enough MSE beats the AWGN route.
        const double sn2 = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
        const double total_snr = sx2 / sn2;
        if (mse <= sn2 * total_snr / (total_snr + 1.0)) {
            CHECK(0.5 * std::log(sx2 / mse) >= 0.5 * std::log1p(total_snr) - 1e-12);
        }
    }
}

TEST_CASE("mutual information histogram", "[metrics]") {
    SECTION("AWGN at unit SNR reproduces half log 2") {
        const Scenario s(ScalarDistribution::gaussian(1.0), ScalarDistribution::gaussian(1.0),
                         0.0, Identity{});
        McSettings mc;
        mc.n_samples = 1'000'000;
        mc.seed = 12;
        const MiEstimate mi = mutual_information_histogram(s, 256, 8.0, mc);
        CHECK(mi.value == Approx(0.5 * std::log(2.0)).epsilon(0.03));
    }

    SECTION("an output independent of the input carries zero information") {
        const Scenario s(ScalarDistribution::gaussian(1.0), ScalarDistribution::gaussian(1.0),
                         0.0, Scale{0.0});
        McSettings mc;
        mc.n_samples = 200000;
        mc.seed = 13;
        const MiEstimate mi = mutual_information_histogram(s, 128, 8.0, mc);
        CHECK(mi.value <= 0.01);
    }

    SECTION("data processing: the estimator output never beats the raw channel") {
        McSettings mc;
        mc.n_samples = 1'000'000;
        mc.seed = 14;
        const MixtureSpec noise = class_a_001();
        const Scenario raw(ScalarDistribution::gaussian(1.0),
                           ScalarDistribution::mixture(noise), 0.0, Identity{});
        const Scenario est(ScalarDistribution::gaussian(1.0),
                           ScalarDistribution::mixture(noise), 0.0,
                           mixture_mmse(1.0, noise));
        const double mi_raw = mutual_information_histogram(raw, 256, 8.0, mc).value;
        const double mi_est = mutual_information_histogram(est, 256, 8.0, mc).value;
        CHECK(mi_raw >= mi_est - 0.02);
    }

    SECTION("deterministic under the execution policy") {
        const Scenario s(ScalarDistribution::gaussian(1.0), ScalarDistribution::gaussian(1.0),
                         0.0, SoftLimiter{1.0});
        McSettings serial;
        serial.n_samples = 300000;
        serial.seed = 15;
        serial.exec = Exec::serial;
        McSettings parallel = serial;
        parallel.exec = Exec::parallel;
        CHECK(mutual_information_histogram(s, 128, 8.0, serial).value ==
              mutual_information_histogram(s, 128, 8.0, parallel).value);
    }

    SECTION("input validation") {
        const Scenario s(ScalarDistribution::gaussian(1.0), ScalarDistribution::gaussian(1.0),
                         0.0, Identity{});
        McSettings mc;
        mc.n_samples = 1000;
        CHECK_THROWS_AS(mutual_information_histogram(s, 128, 8.0, mc),
                        std::invalid_argument);
    }
}

TEST_CASE("linear estimates from the output", "[metrics]") {
    SECTION("identity gives the wiener coefficient") {
        const Scenario s(ScalarDistribution::gaussian(4.0), ScalarDistribution::gaussian(6.0),
                         0.0, Identity{});
        const auto gains = analytic_gains(s);
        REQUIRE(gains.has_value());
        const LinearEstimates est = linear_estimates_from_output(s, *gains);
        CHECK(est.x_coef == Approx(0.4).epsilon(1e-9));
        CHECK(est.n_coef == Approx(0.6).epsilon(1e-9));
        CHECK(est.y_coef == Approx(1.0).epsilon(1e-9));
    }

    SECTION("additivity holds exactly for analytic gains on any scenario") {
        const MixtureSpec noise = class_a_001();
        const Scenario s(ScalarDistribution::gaussian(1.0),
                         ScalarDistribution::mixture(noise), 0.0,
                         SoftLimiter{std::sqrt(2.0)});
        const auto gains = analytic_gains(s);
        REQUIRE(gains.has_value());
        const LinearEstimates est = linear_estimates_from_output(s, *gains);
        CHECK(est.y_coef == Approx(est.x_coef + est.n_coef).epsilon(1e-12));
        // The less distorted component dominates the estimate of the sum.
        CHECK(gains->k_x.value > gains->k_n.value);
        CHECK(est.x_coef > est.n_coef);
    }
}

TEST_CASE("metric route flag distinguishes quadrature from monte carlo", "[metrics]") {
    const Scenario analytic(ScalarDistribution::gaussian(1.0),
                            ScalarDistribution::gaussian(1.0), 0.0, SoftLimiter{1.0});
    CHECK(metrics_for(analytic).analytic_e_g2);
    const Scenario sampled(ScalarDistribution::gaussian(1.0),
                           ScalarDistribution::laplace(1.0), 0.0, SoftLimiter{1.0});
    CHECK_FALSE(metrics_for(sampled).analytic_e_g2);
}

TEST_CASE("dead output makes the linear estimates degenerate", "[metrics]") {
    const Scenario s(ScalarDistribution::gaussian(1.0), ScalarDistribution::gaussian(1.0), 0.0,
                     Scale{0.0});
    GainSet gains;
    const LinearEstimates est = linear_estimates_from_output(s, gains);
    CHECK(est.degenerate);
    CHECK(std::isnan(est.x_coef));
}
