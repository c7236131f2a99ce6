#include "bussgang/gains.hpp"

#include <cmath>
#include <stdexcept>

namespace bussgang {

Scenario::Scenario(ScalarDistribution source_in, ScalarDistribution noise_in,
                   double correlation_in, Nonlinearity g_in)
    : source(std::move(source_in)),
      noise(std::move(noise_in)),
      correlation(correlation_in),
      g(std::move(g_in)) {
    if (correlation != 0.0 && (!source.is_gaussian() || !noise.is_gaussian())) {
        throw std::invalid_argument("scenario: correlation requires Gaussian marginals");
    }
    if (!(correlation > -1.0 && correlation < 1.0)) {
        throw std::invalid_argument("scenario: correlation must lie in (-1, 1)");
    }
    if (!(total_power() > 0.0)) {
        throw std::invalid_argument("scenario: total input power must be positive");
    }
}

double Scenario::total_power() const {
    return source.variance() + noise.variance() +
           2.0 * correlation * std::sqrt(source.variance() * noise.variance());
}

void Scenario::draw_xn(CounterRng& rng, double& x, double& n) const {
    if (correlation != 0.0) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        x = std::sqrt(source.variance()) * z1;
        n = std::sqrt(noise.variance()) *
            (correlation * z1 + std::sqrt(1.0 - correlation * correlation) * z2);
        return;
    }
    x = source.draw(rng);
    n = noise.draw(rng);
}

Estimate gain_gaussian(const Nonlinearity& g, double sigma_y2,
                       const QuadratureSettings& settings) {
    const std::vector<double> bps = breakpoints(g);
    const QuadratureResult r = gaussian_expect(
        [&g](double y) { return evaluate(g, y) * y; }, sigma_y2, bps, settings);
    return {r.value / sigma_y2, 0.0};
}

GainSet gains_mixture(const Nonlinearity& g, double source_variance, const MixtureSpec& noise,
                      const QuadratureSettings& settings) {
    if (!(source_variance > 0.0)) {
        throw std::invalid_argument("gains_mixture: source variance must be positive");
    }
    const std::size_t m = noise.size();
    std::vector<double> component_gain(m);
    const double sigma_n2 = noise.total_variance();
    const double sigma_y2 = source_variance + sigma_n2;
    double k_y = 0.0;
    double k_x = 0.0;
    double k_n = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
        const double sigma_yl2 = source_variance + noise.variance(l);
        component_gain[l] = gain_gaussian(g, sigma_yl2, settings).value;
        const double bw = noise.weight(l) * component_gain[l];
        k_y += bw * sigma_yl2 / sigma_y2;
        k_x += bw;
        k_n += bw * noise.variance(l) / sigma_n2;
    }
    GainSet gains;
    gains.k_y = {k_y, 0.0};
    gains.k_x = {k_x, 0.0};
    gains.k_n = {k_n, 0.0};
    gains.per_component = std::move(component_gain);
    return gains;
}

GainSet gains_double_mixture(const Nonlinearity& g, const MixtureSpec& source,
                             const MixtureSpec& noise, const QuadratureSettings& settings) {
    const std::size_t mx = source.size();
    const std::size_t mn = noise.size();
    if (mx * mn > 10000) {
        throw std::invalid_argument("gains_double_mixture: more than 10^4 component pairs");
    }
    const double sigma_x2 = source.total_variance();
    const double sigma_n2 = noise.total_variance();
    const double sigma_y2 = sigma_x2 + sigma_n2;
    std::vector<double> component_gain(mx * mn);
    double k_y = 0.0;
    double k_x = 0.0;
    double k_n = 0.0;
    for (std::size_t l = 0; l < mx; ++l) {
        for (std::size_t j = 0; j < mn; ++j) {
            const double sx2 = source.variance(l);
            const double sn2 = noise.variance(j);
            const double syl2 = sx2 + sn2;
            const double k = gain_gaussian(g, syl2, settings).value;
            component_gain[l * mn + j] = k;
            const double bw = source.weight(l) * noise.weight(j) * k;
            k_y += bw * syl2 / sigma_y2;
            k_x += bw * sx2 / sigma_x2;
            k_n += bw * sn2 / sigma_n2;
        }
    }
    GainSet gains;
    gains.k_y = {k_y, 0.0};
    gains.k_x = {k_x, 0.0};
    gains.k_n = {k_n, 0.0};
    gains.per_component = std::move(component_gain);
    return gains;
}

Estimate gain_from_derivative(const Nonlinearity& g, double sigma_y2,
                              const QuadratureSettings& settings) {
    if (has_jump_discontinuity(g)) {
        throw std::invalid_argument(
            "gain_from_derivative: invalid for jump discontinuities (needs distributional terms)");
    }
    const std::vector<double> bps = breakpoints(g);
    const QuadratureResult r = gaussian_expect(
        [&g](double y) { return derivative(g, y); }, sigma_y2, bps, settings);
    return {r.value, 0.0};
}

MomentBatches empirical_batch_moments(const Scenario& scenario, const McSettings& mc,
                                      StreamDomain domain) {
    return mc_batch_means<kMomentCount>(
        [&scenario](CounterRng& rng, std::array<double, kMomentCount>& sums) {
            double x = 0.0;
            double n = 0.0;
            scenario.draw_xn(rng, x, n);
            const double y = x + n;
            const double z = evaluate(scenario.g, y);
            sums[kZX] += z * x;
            sums[kZY] += z * y;
            sums[kZN] += z * n;
            sums[kXX] += x * x;
            sums[kYY] += y * y;
            sums[kNN] += n * n;
            sums[kXY] += x * y;
            sums[kXN] += x * n;
            sums[kZZ] += z * z;
        },
        mc, domain);
}

GainSet gains_from_moments(const MomentBatches& batches) {
    GainSet gains;
    gains.k_y = batch_statistic(
        batches, [](const std::array<double, kMomentCount>& b) { return b[kZY] / b[kYY]; });
    gains.k_x = batch_statistic(
        batches, [](const std::array<double, kMomentCount>& b) { return b[kZX] / b[kXX]; });
    gains.k_n = batch_statistic(
        batches, [](const std::array<double, kMomentCount>& b) { return b[kZN] / b[kNN]; });
    return gains;
}

GainSet gains_empirical(const Scenario& scenario, const McSettings& mc) {
    return gains_from_moments(empirical_batch_moments(scenario, mc));
}

std::optional<GainSet> analytic_gains(const Scenario& scenario,
                                      const QuadratureSettings& settings) {
    using Kind = ScalarDistribution::Kind;
    const Kind sk = scenario.source.kind();
    const Kind nk = scenario.noise.kind();
    const double px = scenario.source_power();
    const double pn = scenario.noise_power();

    if (sk == Kind::gaussian && nk == Kind::gaussian) {
        // Y is Gaussian even when the pair is correlated; the partial gains
        // follow from k_v = k_y E{VY} / E{V^2}.
        const double sigma_y2 = scenario.total_power();
        const double k_y = gain_gaussian(scenario.g, sigma_y2, settings).value;
        const double exn = scenario.correlation * std::sqrt(px * pn);
        GainSet gains;
        gains.k_y = {k_y, 0.0};
        gains.k_x = {k_y * (px + exn) / px, 0.0};
        gains.k_n = {k_y * (pn + exn) / pn, 0.0};
        return gains;
    }
    if (scenario.correlation != 0.0) {
        return std::nullopt;
    }
    if (sk == Kind::gaussian && nk == Kind::mixture) {
        return gains_mixture(scenario.g, px, scenario.noise.mixture_spec(), settings);
    }
    if (sk == Kind::mixture && nk == Kind::gaussian) {
        return gains_double_mixture(scenario.g, scenario.source.mixture_spec(),
                                    MixtureSpec({1.0}, {pn}), settings);
    }
    if (sk == Kind::mixture && nk == Kind::mixture) {
        return gains_double_mixture(scenario.g, scenario.source.mixture_spec(),
                                    scenario.noise.mixture_spec(), settings);
    }
    return std::nullopt;
}

}  // namespace bussgang
