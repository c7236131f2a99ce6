#include "bussgang/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bussgang {

CondLinearityReport check_conditional_linearity(const Scenario& scenario, int bins,
                                                const McSettings& mc) {
    if (scenario.correlation != 0.0) {
        throw std::invalid_argument("check_conditional_linearity: needs a correlation-free scenario");
    }
    if (bins < 2) {
        throw std::invalid_argument("check_conditional_linearity: need at least 2 bins");
    }
    const std::int64_t n = mc.n_samples;
    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<double> ys(static_cast<std::size_t>(n));
    constexpr std::int64_t kChunk = 1 << 16;
    const std::int64_t chunks = (n + kChunk - 1) / kChunk;
    for_each_index(chunks, mc.exec, [&](std::int64_t c) {
        CounterRng rng(mc.seed, StreamDomain::verify, static_cast<std::uint64_t>(c));
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(n, begin + kChunk);
        for (std::int64_t i = begin; i < end; ++i) {
            double x = 0.0;
            double nz = 0.0;
            scenario.draw_xn(rng, x, nz);
            xs[static_cast<std::size_t>(i)] = x;
            ys[static_cast<std::size_t>(i)] = x + nz;
        }
    });

    CondLinearityReport report;
    report.name = "conditional_linearity";
    report.alpha_theory = scenario.source_power() / scenario.total_power();

    // Global regression slope with batch-means error.
    {
        const int n_batches = mc.n_batches;
        std::vector<double> ratios(static_cast<std::size_t>(n_batches));
        for (int b = 0; b < n_batches; ++b) {
            const std::int64_t begin = detail::batch_begin(n, n_batches, b);
            const std::int64_t end = detail::batch_begin(n, n_batches, b + 1);
            double sxy = 0.0;
            double syy = 0.0;
            for (std::int64_t i = begin; i < end; ++i) {
                sxy += xs[static_cast<std::size_t>(i)] * ys[static_cast<std::size_t>(i)];
                syy += ys[static_cast<std::size_t>(i)] * ys[static_cast<std::size_t>(i)];
            }
            ratios[static_cast<std::size_t>(b)] = sxy / syy;
        }
        const double nb = static_cast<double>(n_batches);
        double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / nb;
        double ss = 0.0;
        for (double r : ratios) {
            ss += (r - mean) * (r - mean);
        }
        report.alpha_hat = mean;
        report.alpha_hat_se = std::sqrt(ss / (nb - 1.0)) / std::sqrt(nb);
    }

    // Equal-probability bins over sorted Y.
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&ys](std::size_t a, std::size_t b) { return ys[a] < ys[b]; });

    double max_t = 0.0;
    for (int b = 0; b < bins; ++b) {
        const std::int64_t begin = detail::batch_begin(n, bins, b);
        const std::int64_t end = detail::batch_begin(n, bins, b + 1);
        const std::int64_t count = end - begin;
        if (count < 100) {
            ++report.bins_dropped;
            continue;
        }
        double sy = 0.0;
        double sx = 0.0;
        for (std::int64_t i = begin; i < end; ++i) {
            sy += ys[order[static_cast<std::size_t>(i)]];
            sx += xs[order[static_cast<std::size_t>(i)]];
        }
        const double mean_y = sy / static_cast<double>(count);
        const double mean_x = sx / static_cast<double>(count);
        double ssx = 0.0;
        for (std::int64_t i = begin; i < end; ++i) {
            const double d = xs[order[static_cast<std::size_t>(i)]] - mean_x;
            ssx += d * d;
        }
        const double se = std::sqrt(ssx / static_cast<double>(count - 1)) /
                          std::sqrt(static_cast<double>(count));
        const double se_eff = std::sqrt(se * se + report.alpha_hat_se * report.alpha_hat_se *
                                                      mean_y * mean_y);
        const double t = std::abs(mean_x - report.alpha_hat * mean_y) / se_eff;
        max_t = std::max(max_t, t);
        report.bin_centers.push_back(mean_y);
        report.bin_means.push_back(mean_x);
        report.bin_std_errors.push_back(se);
        ++report.bins_used;
    }
    report.max_bin_deviation = max_t;
    report.passed = std::abs(report.alpha_hat - report.alpha_theory) <=
                        4.0 * report.alpha_hat_se &&
                    max_t <= report.bin_tolerance;
    return report;
}

std::vector<double> default_char_grid(const ScalarDistribution& x,
                                      const ScalarDistribution& n, int points) {
    const double sigma = std::sqrt(std::max(x.variance(), n.variance()));
    const double u_max = 0.75 / sigma;
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] =
            -u_max + 2.0 * u_max * static_cast<double>(i) / (points - 1);
    }
    return grid;
}

CharConditionReport check_char_condition(const ScalarDistribution& x,
                                         const ScalarDistribution& n,
                                         std::span<const double> u_grid) {
    CharConditionReport report;
    report.name = "char_condition";
    report.alpha = x.variance() / (x.variance() + n.variance());

    // Real positive characteristic functions only; find the clip radius as
    // the smallest |u| where either CF drops to zero or below.
    double clip = std::numeric_limits<double>::infinity();
    for (double u : u_grid) {
        const double cx = x.char_function(u).real();
        const double cn = n.char_function(u).real();
        if (cx <= 0.0 || cn <= 0.0) {
            clip = std::min(clip, std::abs(u));
            report.grid_clipped = true;
        }
    }
    double max_dev = 0.0;
    int used = 0;
    for (double u : u_grid) {
        if (std::abs(u) >= clip) {
            continue;
        }
        const double cx = x.char_function(u).real();
        const double cn = n.char_function(u).real();
        const double lhs = std::pow(cx, 1.0 - report.alpha);
        const double rhs = std::pow(cn, report.alpha);
        max_dev = std::max(max_dev, std::abs(lhs - rhs));
        ++used;
    }
    report.points_used = used;
    report.max_deviation = max_dev;
    if (used < 16) {
        report.inconclusive = true;
        report.passed = false;
        return report;
    }
    report.passed = max_dev <= report.tolerance;
    return report;
}

namespace {

/// Standardized |mean| of a per-batch statistic.
template <std::size_t K, class Fn>
double standardized(const std::vector<std::array<double, K>>& batches, Fn&& fn) {
    const Estimate e = batch_statistic(batches, std::forward<Fn>(fn));
    return std::abs(e.value) / e.std_error;
}

}  // namespace

CheckReport check_equal_gain(const Scenario& scenario, const McSettings& mc) {
    const MomentBatches batches = empirical_batch_moments(scenario, mc, StreamDomain::verify);
    const GainSet gains = gains_from_moments(batches);

    using Row = std::array<double, kMomentCount>;
    const double t_yx = standardized(batches, [](const Row& b) {
        return b[kZY] / b[kYY] - b[kZX] / b[kXX];
    });
    const double t_yn = standardized(batches, [](const Row& b) {
        return b[kZY] / b[kYY] - b[kZN] / b[kNN];
    });
    const double t_xn = standardized(batches, [](const Row& b) {
        return b[kZX] / b[kXX] - b[kZN] / b[kNN];
    });

    // Residual-correlation identities: E{W_y X} = (k_x - k_y) E{X^2} and
    // E{W_y X} = -E{W_y N}; both hold for any orthogonal pair, so large
    // deviations flag an engine bug rather than a theorem violation.
    const double t_res_kx = standardized(batches, [](const Row& b) {
        const double k_y = b[kZY] / b[kYY];
        const double k_x = b[kZX] / b[kXX];
        const double w_yx = b[kZX] - k_y * b[kXY];
        return w_yx - (k_x - k_y) * b[kXX];
    });
    const double t_res_sum = standardized(batches, [](const Row& b) {
        const double k_y = b[kZY] / b[kYY];
        const double w_yx = b[kZX] - k_y * b[kXY];
        const double w_yn = b[kZN] - k_y * (b[kXN] + b[kNN]);
        return w_yx + w_yn;
    });

    CheckReport report;
    report.name = "equal_gain";
    report.statistic = std::max(t_yx, t_yn);
    report.tolerance = 4.0;
    report.passed = report.statistic <= report.tolerance;
    report.diagnostics = {
        {"k_y", gains.k_y.value},          {"k_y_se", gains.k_y.std_error},
        {"k_x", gains.k_x.value},          {"k_x_se", gains.k_x.std_error},
        {"k_n", gains.k_n.value},          {"k_n_se", gains.k_n.std_error},
        {"t_ky_kx", t_yx},                 {"t_ky_kn", t_yn},
        {"t_kx_kn", t_xn},                 {"t_residual_eq14", t_res_kx},
        {"t_residual_antisym", t_res_sum},
    };
    return report;
}

CheckReport check_scaling_lemma_pair(double a_x, double a_n, double sigma_x2, double sigma_n2,
                                     const Nonlinearity& g, const McSettings& mc) {
    if (a_x == 0.0 || a_n == 0.0) {
        throw std::invalid_argument("check_scaling_lemma_pair: scale factors must be nonzero");
    }
    const double sx = std::sqrt(sigma_x2);
    const double sn = std::sqrt(sigma_n2);
    auto batches = mc_batch_means<6>(
        [&](CounterRng& rng, std::array<double, 6>& s) {
            const double x = sx * rng.normal();
            const double n = sn * rng.normal();
            const double y = a_x * x + a_n * n;
            const double z = evaluate(g, y);
            s[0] += z * y;
            s[1] += y * y;
            s[2] += z * x;
            s[3] += x * x;
            s[4] += z * n;
            s[5] += n * n;
        },
        mc, StreamDomain::verify);
    using Row = std::array<double, 6>;
    const double t_x = standardized(batches, [a_x](const Row& b) {
        return b[0] / b[1] - (1.0 / a_x) * b[2] / b[3];
    });
    const double t_n = standardized(batches, [a_n](const Row& b) {
        return b[0] / b[1] - (1.0 / a_n) * b[4] / b[5];
    });

    CheckReport report;
    report.name = "scaling_lemma_pair";
    report.statistic = std::max(t_x, t_n);
    report.tolerance = 5.0;
    report.passed = report.statistic <= report.tolerance;
    report.diagnostics = {{"t_x", t_x}, {"t_n", t_n}};
    return report;
}

CheckReport check_scaling_lemma_sum(std::span<const double> alphas,
                                    std::span<const double> variances, const Nonlinearity& g,
                                    const McSettings& mc) {
    const std::size_t j_count = alphas.size();
    if (j_count < 2 || j_count > 8 || variances.size() != j_count) {
        throw std::invalid_argument("check_scaling_lemma_sum: need 2..8 matching components");
    }
    CheckReport report;
    report.name = "scaling_lemma_sum";
    report.tolerance = 5.0;
    double statistic = 0.0;
    for (std::size_t i = 0; i < j_count; ++i) {
        if (alphas[i] == 0.0) {
            continue;  // zero-weight component carries no identity
        }
        auto batches = mc_batch_means<4>(
            [&](CounterRng& rng, std::array<double, 4>& s) {
                double y = 0.0;
                double xi = 0.0;
                for (std::size_t j = 0; j < j_count; ++j) {
                    const double x = std::sqrt(variances[j]) * rng.normal();
                    y += alphas[j] * x;
                    if (j == i) {
                        xi = x;
                    }
                }
                const double z = evaluate(g, y);
                s[0] += z * y;
                s[1] += y * y;
                s[2] += z * xi;
                s[3] += xi * xi;
            },
            mc, StreamDomain::verify);
        using Row = std::array<double, 4>;
        const double a_i = alphas[i];
        const double t = standardized(batches, [a_i](const Row& b) {
            return b[0] / b[1] - (1.0 / a_i) * b[2] / b[3];
        });
        report.diagnostics.emplace_back("t_component_" + std::to_string(i), t);
        statistic = std::max(statistic, t);
    }
    report.statistic = statistic;
    report.passed = statistic <= report.tolerance;
    return report;
}

CheckReport check_bound_ordering(int n_trials, std::uint64_t seed) {
    if (n_trials < 1) {
        throw std::invalid_argument("check_bound_ordering: need at least one trial");
    }
    CounterRng rng(seed, StreamDomain::verify, 0xB0u);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_trials; ++i) {
        const double k = -3.0 + 6.0 * rng.uniform();
        const double p_wx = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
        const double sigma_x2 = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
        const double snr = k * k * sigma_x2 / p_wx;
        const double mse = p_wx + (1.0 - k) * (1.0 - k) * sigma_x2;
        // 1 + SNR_x >= sigma_x^2 / MSE, cross-multiplied.
        const double violation = (sigma_x2 - (1.0 + snr) * mse) / sigma_x2;
        worst = std::max(worst, violation);
    }
    CheckReport report;
    report.name = "bound_ordering";
    report.statistic = worst;
    report.tolerance = 0.0;
    report.passed = worst <= 0.0;
    report.diagnostics = {{"trials", static_cast<double>(n_trials)}};
    return report;
}

}  // namespace bussgang
