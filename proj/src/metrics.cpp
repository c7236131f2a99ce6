#include "bussgang/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bussgang {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

/// Mixture law of Y = X + N when both marginals are Gaussian or mixtures and
/// the pair is independent. Gaussian counts as a one-component mixture.
std::optional<MixtureSpec> output_law(const Scenario& scenario) {
    using Kind = ScalarDistribution::Kind;
    auto as_mixture = [](const ScalarDistribution& d) -> std::optional<MixtureSpec> {
        if (d.kind() == Kind::gaussian) {
            return MixtureSpec({1.0}, {d.variance()});
        }
        if (d.kind() == Kind::mixture) {
            return d.mixture_spec();
        }
        return std::nullopt;
    };
    if (scenario.correlation != 0.0) {
        // Correlated pairs are Gaussian by construction; Y stays Gaussian.
        return MixtureSpec({1.0}, {scenario.total_power()});
    }
    const auto sx = as_mixture(scenario.source);
    const auto sn = as_mixture(scenario.noise);
    if (!sx || !sn) {
        return std::nullopt;
    }
    std::vector<double> weights;
    std::vector<double> variances;
    weights.reserve(sx->size() * sn->size());
    variances.reserve(sx->size() * sn->size());
    for (std::size_t l = 0; l < sx->size(); ++l) {
        for (std::size_t j = 0; j < sn->size(); ++j) {
            weights.push_back(sx->weight(l) * sn->weight(j));
            variances.push_back(sx->variance(l) + sn->variance(j));
        }
    }
    return MixtureSpec(std::move(weights), std::move(variances));
}

}  // namespace

Estimate output_second_moment(const Scenario& scenario, const QuadratureSettings& quad,
                              const McSettings& mc, bool* analytic) {
    const auto law = output_law(scenario);
    if (law) {
        if (analytic != nullptr) {
            *analytic = true;
        }
        const std::vector<double> bps = breakpoints(scenario.g);
        const QuadratureResult r = mixture_expect(
            [&scenario](double y) {
                const double z = evaluate(scenario.g, y);
                return z * z;
            },
            *law, bps, quad);
        return r.as_estimate();
    }
    if (analytic != nullptr) {
        *analytic = false;
    }
    return mc_expect(
        [&scenario](CounterRng& rng) {
            double x = 0.0;
            double n = 0.0;
            scenario.draw_xn(rng, x, n);
            const double z = evaluate(scenario.g, x + n);
            return z * z;
        },
        mc, StreamDomain::metrics);
}

MetricSet metric_set(const Scenario& scenario, const GainSet& gains,
                     const QuadratureSettings& quad, const McSettings& mc) {
    MetricSet m;
    m.k_x = gains.k_x.value;
    m.k_y = gains.k_y.value;
    m.sigma_x2 = scenario.source_power();
    m.sigma_n2 = scenario.noise_power();
    m.e_g2 = output_second_moment(scenario, quad, mc, &m.analytic_e_g2);

    const double e2 = m.e_g2.value;
    const double scale = std::sqrt(std::max(e2, 0.0) / m.sigma_x2);
    const bool dead_output = !(e2 > 0.0);
    m.degenerate_kx = dead_output || std::abs(m.k_x) < 1e-9 * scale;
    m.degenerate_ky = dead_output || std::abs(m.k_y) < 1e-9 * scale;

    m.residual_power_wx = e2 - m.k_x * m.k_x * m.sigma_x2;

    if (m.degenerate_kx) {
        m.snr_x = kNan;
        m.mse_u = kNan;
        m.c_snr_x = kNan;
    } else {
        const double kx2sx2 = m.k_x * m.k_x * m.sigma_x2;
        m.snr_x = kx2sx2 / (e2 - kx2sx2);
        m.mse_u = e2 / (m.k_x * m.k_x) - m.sigma_x2;
        m.c_snr_x = 0.5 * std::log1p(m.snr_x);
    }
    if (m.degenerate_ky) {
        m.snr_y = kNan;
        m.c_snr_y = kNan;
    } else {
        const double ky2sx2 = m.k_y * m.k_y * m.sigma_x2;
        m.snr_y = ky2sx2 / (e2 - ky2sx2);
        m.c_snr_y = 0.5 * std::log1p(m.snr_y);
    }
    m.mse = e2 + (1.0 - 2.0 * m.k_x) * m.sigma_x2;
    m.c_mse = 0.5 * std::log(m.sigma_x2 / m.mse);
    m.c_awgn = 0.5 * std::log1p(m.sigma_x2 / m.sigma_n2);
    m.unit = CapacityUnit::nats;
    return m;
}

Estimate mse_quadrature(const Nonlinearity& g, double source_variance,
                        const MixtureSpec& noise, const QuadratureSettings& settings) {
    const GainSet gains = gains_mixture(g, source_variance, noise, settings);
    const std::vector<double> bps = breakpoints(g);

    std::vector<double> weights;
    std::vector<double> variances;
    for (std::size_t l = 0; l < noise.size(); ++l) {
        weights.push_back(noise.weight(l));
        variances.push_back(source_variance + noise.variance(l));
    }
    const MixtureSpec y_law(std::move(weights), std::move(variances));
    const QuadratureResult e2 = mixture_expect(
        [&g](double y) {
            const double z = evaluate(g, y);
            return z * z;
        },
        y_law, bps, settings);
    return {e2.value + (1.0 - 2.0 * gains.k_x.value) * source_variance, 0.0};
}

MiEstimate mutual_information_histogram(const Scenario& scenario, int bins_per_axis,
                                        double range_multiple, const McSettings& mc) {
    if (bins_per_axis < 2) {
        throw std::invalid_argument("mutual_information_histogram: need at least 2 bins");
    }
    if (mc.n_samples < 100000) {
        throw std::invalid_argument("mutual_information_histogram: need >= 1e5 samples");
    }
    const double sigma_x = std::sqrt(scenario.source_power());

    // Output-axis scale: analytic E{g^2} when available, else a short
    // pre-pass on a dedicated substream.
    bool analytic = false;
    McSettings prepass = mc;
    prepass.n_samples = 100000;
    prepass.seed = mc.seed ^ 0x9e3779b97f4a7c15ull;
    const double z2 = output_second_moment(scenario, {}, prepass, &analytic).value;
    const double sigma_z = std::sqrt(std::max(z2, 0.0));

    const int bins = bins_per_axis;
    const double x_edge = range_multiple * sigma_x;
    const double z_edge = sigma_z > 0.0 ? range_multiple * sigma_z : 1.0;
    const double x_scale = static_cast<double>(bins) / (2.0 * x_edge);
    const double z_scale = static_cast<double>(bins) / (2.0 * z_edge);

    const std::size_t cells = static_cast<std::size_t>(bins) * bins;
    std::vector<std::uint64_t> counts(cells, 0);

    constexpr std::int64_t kChunk = 1 << 16;
    const std::int64_t chunks = (mc.n_samples + kChunk - 1) / kChunk;

    auto fill_chunk = [&](std::int64_t c, std::vector<std::uint64_t>& local) {
        CounterRng rng(mc.seed, StreamDomain::mutual_information,
                       static_cast<std::uint64_t>(c));
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(mc.n_samples, begin + kChunk);
        for (std::int64_t i = begin; i < end; ++i) {
            double x = 0.0;
            double n = 0.0;
            scenario.draw_xn(rng, x, n);
            const double z = evaluate(scenario.g, x + n);
            const double bx = std::floor((x + x_edge) * x_scale);
            const double bz = std::floor((z + z_edge) * z_scale);
            const int ix = static_cast<int>(std::clamp(bx, 0.0, static_cast<double>(bins - 1)));
            const int iz = static_cast<int>(std::clamp(bz, 0.0, static_cast<double>(bins - 1)));
            ++local[static_cast<std::size_t>(ix) * bins + iz];
        }
    };

    if (mc.exec == Exec::parallel) {
#pragma omp parallel
        {
            std::vector<std::uint64_t> local(cells, 0);
#pragma omp for schedule(dynamic, 1)
            for (std::int64_t c = 0; c < chunks; ++c) {
                fill_chunk(c, local);
            }
            // Integer merge: order across threads cannot change the totals.
#pragma omp critical
            {
                for (std::size_t i = 0; i < cells; ++i) {
                    counts[i] += local[i];
                }
            }
        }
    } else {
        for (std::int64_t c = 0; c < chunks; ++c) {
            fill_chunk(c, counts);
        }
    }

    std::vector<std::uint64_t> row(bins, 0);
    std::vector<std::uint64_t> col(bins, 0);
    for (int i = 0; i < bins; ++i) {
        for (int j = 0; j < bins; ++j) {
            const std::uint64_t c = counts[static_cast<std::size_t>(i) * bins + j];
            row[i] += c;
            col[j] += c;
        }
    }
    const double n = static_cast<double>(mc.n_samples);
    double mi = 0.0;
    std::int64_t occupied_joint = 0;
    std::int64_t occupied_col = 0;
    for (int j = 0; j < bins; ++j) {
        occupied_col += col[j] > 0 ? 1 : 0;
    }
    std::int64_t occupied_row = 0;
    for (int i = 0; i < bins; ++i) {
        if (row[i] == 0) {
            continue;
        }
        ++occupied_row;
        for (int j = 0; j < bins; ++j) {
            const std::uint64_t c = counts[static_cast<std::size_t>(i) * bins + j];
            if (c == 0) {
                continue;
            }
            ++occupied_joint;
            const double p = static_cast<double>(c) / n;
            mi += p * std::log(static_cast<double>(c) * n /
                               (static_cast<double>(row[i]) * static_cast<double>(col[j])));
        }
    }
    // Miller-Madow correction: the plug-in estimate carries a positive bias
    // of about (occupied cells)/(2n), which at 512 bins and 1e7 samples is
    // larger than the acceptance tolerances at low SNR.
    mi -= static_cast<double>(occupied_joint - occupied_row - occupied_col + 1) / (2.0 * n);

    MiEstimate estimate;
    estimate.value = std::max(mi, 0.0);
    estimate.n_samples = mc.n_samples;
    estimate.bins_per_axis = bins;
    estimate.range_multiple = range_multiple;
    return estimate;
}

LinearEstimates linear_estimates_from_output(const Scenario& scenario, const GainSet& gains,
                                             const QuadratureSettings& quad,
                                             const McSettings& mc) {
    const Estimate e2 = output_second_moment(scenario, quad, mc);
    LinearEstimates est;
    const double sigma_z2 = e2.value;
    if (!(sigma_z2 > 0.0) ||
        sigma_z2 < 1e-30 * std::max(scenario.source_power(), scenario.noise_power())) {
        est.degenerate = true;
        est.x_coef = est.n_coef = est.y_coef = kNan;
        return est;
    }
    est.x_coef = gains.k_x.value * scenario.source_power() / sigma_z2;
    est.n_coef = gains.k_n.value * scenario.noise_power() / sigma_z2;
    est.y_coef =
        gains.k_y.value * (scenario.source_power() + scenario.noise_power()) / sigma_z2;
    return est;
}

}  // namespace bussgang
