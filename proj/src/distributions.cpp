#include "bussgang/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bussgang {

namespace {

constexpr std::int64_t kSampleChunk = 1 << 16;

void require(bool ok, const char* what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

}  // namespace

double gaussian_pdf(double x, double variance) {
    return std::exp(-0.5 * x * x / variance) /
           std::sqrt(2.0 * std::numbers::pi * variance);
}

MixtureSpec::MixtureSpec(std::vector<double> weights, std::vector<double> variances)
    : weights_(std::move(weights)), variances_(std::move(variances)) {
    require(!weights_.empty(), "mixture: at least one component");
    require(weights_.size() == variances_.size(), "mixture: weights/variances length mismatch");
    double mass = 0.0;
    for (double w : weights_) {
        require(w >= 0.0, "mixture: negative weight");
        mass += w;
    }
    require(std::abs(mass - 1.0) <= 1e-12, "mixture: weights must sum to 1");
    for (double v : variances_) {
        require(v > 0.0, "mixture: component variance must be positive");
    }
}

double MixtureSpec::total_variance() const {
    double total = 0.0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        total += weights_[l] * variances_[l];
    }
    return total;
}

double MixtureSpec::pdf(double x) const {
    double density = 0.0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        density += weights_[l] * gaussian_pdf(x, variances_[l]);
    }
    return density;
}

MixtureSpec class_a_mixture(const ClassAParams& params) {
    require(params.impulsive_index > 0.0, "class_a: impulsive index must be positive");
    require(params.gamma > 0.0, "class_a: gamma must be positive");
    require(params.total_variance > 0.0, "class_a: total variance must be positive");
    require(params.mass_tolerance > 0.0 && params.mass_tolerance < 1.0,
            "class_a: mass tolerance must be in (0,1)");

    constexpr int kMaxComponents = 10000;
    const double a = params.impulsive_index;
    std::vector<double> weights;
    std::vector<double> variances;
    double term = std::exp(-a);  // e^{-A} A^l / l! at l = 0
    double mass = 0.0;
    for (int l = 0; l < kMaxComponents; ++l) {
        weights.push_back(term);
        variances.push_back((static_cast<double>(l) / a + params.gamma) /
                            (1.0 + params.gamma) * params.total_variance);
        mass += term;
        if (mass >= 1.0 - params.mass_tolerance) {
            for (double& w : weights) {
                w /= mass;
            }
            return MixtureSpec(std::move(weights), std::move(variances));
        }
        term *= a / static_cast<double>(l + 1);
    }
    throw std::runtime_error("class_a: truncation did not reach requested mass within 10^4 components");
}

ScalarDistribution::ScalarDistribution(Kind kind, double variance, MixtureSpec mix)
    : kind_(kind), variance_(variance), mixture_(std::move(mix)) {}

ScalarDistribution ScalarDistribution::gaussian(double variance) {
    require(variance > 0.0, "distribution: variance must be positive");
    return ScalarDistribution(Kind::gaussian, variance, MixtureSpec({1.0}, {variance}));
}

ScalarDistribution ScalarDistribution::mixture(MixtureSpec mix) {
    const double variance = mix.total_variance();
    return ScalarDistribution(Kind::mixture, variance, std::move(mix));
}

ScalarDistribution ScalarDistribution::laplace(double variance) {
    require(variance > 0.0, "distribution: variance must be positive");
    return ScalarDistribution(Kind::laplace, variance, MixtureSpec({1.0}, {variance}));
}

ScalarDistribution ScalarDistribution::uniform(double variance) {
    require(variance > 0.0, "distribution: variance must be positive");
    return ScalarDistribution(Kind::uniform, variance, MixtureSpec({1.0}, {variance}));
}

ScalarDistribution ScalarDistribution::triangular(double variance) {
    require(variance > 0.0, "distribution: variance must be positive");
    return ScalarDistribution(Kind::triangular, variance, MixtureSpec({1.0}, {variance}));
}

const MixtureSpec& ScalarDistribution::mixture_spec() const {
    if (kind_ != Kind::mixture) {
        throw std::logic_error("mixture_spec: not a mixture distribution");
    }
    return mixture_;
}

double ScalarDistribution::pdf(double x) const {
    const double sigma = std::sqrt(variance_);
    switch (kind_) {
        case Kind::gaussian:
            return gaussian_pdf(x, variance_);
        case Kind::mixture:
            return mixture_.pdf(x);
        case Kind::laplace:
            // f(x) = 1/(sqrt(2) sigma) exp(-sqrt(2)|x|/sigma), variance sigma^2.
            return std::exp(-std::numbers::sqrt2 * std::abs(x) / sigma) /
                   (std::numbers::sqrt2 * sigma);
        case Kind::uniform: {
            const double half_width = std::sqrt(3.0) * sigma;
            return std::abs(x) <= half_width ? 0.5 / half_width : 0.0;
        }
        case Kind::triangular: {
            const double half_width = std::sqrt(6.0) * sigma;
            const double t = half_width - std::abs(x);
            return t > 0.0 ? t / (half_width * half_width) : 0.0;
        }
    }
    return 0.0;
}

namespace {

double sinc(double t) {
    if (std::abs(t) < 1e-8) {
        return 1.0 - t * t / 6.0;
    }
    return std::sin(t) / t;
}

}  // namespace

std::complex<double> ScalarDistribution::char_function(double u) const {
    const double two_pi_u = 2.0 * std::numbers::pi * u;
    const double sigma = std::sqrt(variance_);
    switch (kind_) {
        case Kind::gaussian: {
            const double a = std::numbers::pi * sigma * u;
            return {std::exp(-2.0 * a * a), 0.0};
        }
        case Kind::mixture: {
            double value = 0.0;
            for (std::size_t l = 0; l < mixture_.size(); ++l) {
                const double a = std::numbers::pi * std::sqrt(mixture_.variance(l)) * u;
                value += mixture_.weight(l) * std::exp(-2.0 * a * a);
            }
            return {value, 0.0};
        }
        case Kind::laplace: {
            // 1 / (1 + b^2 t^2) with b^2 = variance / 2, t = 2 pi u.
            return {1.0 / (1.0 + 0.5 * variance_ * two_pi_u * two_pi_u), 0.0};
        }
        case Kind::uniform: {
            const double half_width = std::sqrt(3.0) * sigma;
            return {sinc(half_width * two_pi_u), 0.0};
        }
        case Kind::triangular: {
            // T(variance) = U(variance/2) * U(variance/2), so the CF is the
            // squared CF of the uniform half.
            const double half = std::sqrt(3.0 * variance_ / 2.0);
            const double s = sinc(half * two_pi_u);
            return {s * s, 0.0};
        }
    }
    return {0.0, 0.0};
}

std::vector<std::complex<double>> ScalarDistribution::char_function(
    std::span<const double> u_grid) const {
    std::vector<std::complex<double>> values(u_grid.size());
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
        values[i] = char_function(u_grid[i]);
    }
    return values;
}

double ScalarDistribution::draw(CounterRng& rng) const {
    const double sigma = std::sqrt(variance_);
    switch (kind_) {
        case Kind::gaussian:
            return sigma * rng.normal();
        case Kind::mixture: {
            const double u = rng.uniform();
            double cumulative = 0.0;
            std::size_t pick = mixture_.size() - 1;
            for (std::size_t l = 0; l < mixture_.size(); ++l) {
                cumulative += mixture_.weight(l);
                if (u <= cumulative) {
                    pick = l;
                    break;
                }
            }
            return std::sqrt(mixture_.variance(pick)) * rng.normal();
        }
        case Kind::laplace: {
            const double u = rng.uniform() - 0.5;
            const double b = sigma / std::numbers::sqrt2;
            return -b * std::copysign(1.0, u) * std::log1p(-2.0 * std::abs(u));
        }
        case Kind::uniform:
            return std::sqrt(3.0) * sigma * (2.0 * rng.uniform() - 1.0);
        case Kind::triangular: {
            const double half = std::sqrt(3.0 * variance_ / 2.0);
            return half * (2.0 * rng.uniform() - 1.0) + half * (2.0 * rng.uniform() - 1.0);
        }
    }
    return 0.0;
}

std::vector<double> ScalarDistribution::sample(std::int64_t n, std::uint64_t seed,
                                               Exec exec) const {
    if (n < 1) {
        throw std::invalid_argument("sample: n must be >= 1");
    }
    std::vector<double> values(static_cast<std::size_t>(n));
    const std::int64_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
    for_each_index(chunks, exec, [&](std::int64_t c) {
        CounterRng rng(seed, StreamDomain::sample, static_cast<std::uint64_t>(c));
        const std::int64_t begin = c * kSampleChunk;
        const std::int64_t end = std::min(n, begin + kSampleChunk);
        for (std::int64_t i = begin; i < end; ++i) {
            values[static_cast<std::size_t>(i)] = draw(rng);
        }
    });
    return values;
}

const char* kind_name(ScalarDistribution::Kind kind) {
    switch (kind) {
        case ScalarDistribution::Kind::gaussian: return "gaussian";
        case ScalarDistribution::Kind::mixture: return "mixture";
        case ScalarDistribution::Kind::laplace: return "laplace";
        case ScalarDistribution::Kind::uniform: return "uniform";
        case ScalarDistribution::Kind::triangular: return "triangular";
    }
    return "unknown";
}

}  // namespace bussgang
