#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bussgang/distributions.hpp"
#include "bussgang/parallel.hpp"
#include "bussgang/rng.hpp"

namespace bussgang {

struct QuadratureSettings {
    double relative_tolerance = 1e-10;
    double support_multiple = 10.0;  // integrate over +/- support_multiple * sigma
    int max_panels = 1 << 14;
};

struct McSettings {
    std::int64_t n_samples = 1'000'000;
    std::uint64_t seed = 0;
    int n_batches = 100;
    Exec exec = Exec::parallel;
};

/// A value with a standard error (zero for deterministic quadrature).
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;

    Estimate as_estimate() const { return {value, 0.0}; }
};

/// Raised when the panel budget runs out; carries the last estimate and its
/// residual so callers can decide whether to keep it.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double last_value, double residual)
        : std::runtime_error(what), last_value(last_value), residual(residual) {}

    double last_value;
    double residual;
};

/// E{phi(Y)} for Gaussian Y via globally adaptive Gauss-Kronrod (G7,K15)
/// panels over [-k sigma, k sigma]. Panels are pre-split at the declared
/// breakpoints of phi so kinks and jumps never sit inside a panel.
QuadratureResult gaussian_expect(const std::function<double(double)>& phi, double variance,
                                 std::span<const double> breakpoints = {},
                                 const QuadratureSettings& settings = {});

/// E{phi(Y)} for mixture Y: weight-averaged per-component Gaussian
/// expectations, with the tolerance budget split across components.
QuadratureResult mixture_expect(const std::function<double(double)>& phi,
                                const MixtureSpec& mix,
                                std::span<const double> breakpoints = {},
                                const QuadratureSettings& settings = {});

namespace detail {

inline std::int64_t batch_begin(std::int64_t n, int n_batches, int b) {
    return n * b / n_batches;
}

}  // namespace detail

/// Per-batch means of a K-statistic Monte Carlo draw. `accumulate` consumes
/// one joint sample from the substream and adds its contributions to the
/// K-vector. Batch b always owns substream (seed, domain, b), so the result
/// is bit-identical for fixed (seed, n_samples, n_batches) under any
/// execution policy or thread count.
template <std::size_t K, class AccumulateFn>
std::vector<std::array<double, K>> mc_batch_means(AccumulateFn&& accumulate,
                                                  const McSettings& settings,
                                                  StreamDomain domain = StreamDomain::mc_expect) {
    if (settings.n_batches < 2 || settings.n_samples < settings.n_batches) {
        throw std::invalid_argument("mc: need n_samples >= n_batches >= 2");
    }
    std::vector<std::array<double, K>> batches(static_cast<std::size_t>(settings.n_batches));
    for_each_index(settings.n_batches, settings.exec, [&](std::int64_t b) {
        CounterRng rng(settings.seed, domain, static_cast<std::uint64_t>(b));
        const std::int64_t begin =
            detail::batch_begin(settings.n_samples, settings.n_batches, static_cast<int>(b));
        const std::int64_t end =
            detail::batch_begin(settings.n_samples, settings.n_batches, static_cast<int>(b) + 1);
        std::array<double, K> sums{};
        for (std::int64_t i = begin; i < end; ++i) {
            accumulate(rng, sums);
        }
        const double inv = 1.0 / static_cast<double>(end - begin);
        for (auto& s : sums) {
            s *= inv;
        }
        batches[static_cast<std::size_t>(b)] = sums;
    });
    return batches;
}

/// Mean and batch-means standard error of a per-batch scalar statistic.
template <std::size_t K, class StatFn>
Estimate batch_statistic(const std::vector<std::array<double, K>>& batches, StatFn&& stat) {
    const double n = static_cast<double>(batches.size());
    double mean = 0.0;
    for (const auto& b : batches) {
        mean += stat(b);
    }
    mean /= n;
    double ss = 0.0;
    for (const auto& b : batches) {
        const double d = stat(b) - mean;
        ss += d * d;
    }
    const double batch_sd = std::sqrt(ss / (n - 1.0));
    return {mean, batch_sd / std::sqrt(n)};
}

/// E{phi(sample)} by batched Monte Carlo; draw: (CounterRng&) -> double.
template <class DrawFn>
Estimate mc_expect(DrawFn&& draw, const McSettings& settings,
                   StreamDomain domain = StreamDomain::mc_expect) {
    auto batches = mc_batch_means<1>(
        [&](CounterRng& rng, std::array<double, 1>& sums) { sums[0] += draw(rng); }, settings,
        domain);
    return batch_statistic(batches, [](const std::array<double, 1>& b) { return b[0]; });
}

}  // namespace bussgang
