#include "bussgang/nonlinearities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bussgang/metrics.hpp"

namespace bussgang {

MixtureMmse::MixtureMmse(double source_variance, MixtureSpec noise)
    : source_variance_(source_variance), noise_(std::move(noise)) {
    if (!(source_variance_ > 0.0)) {
        throw std::invalid_argument("mixture_mmse: source variance must be positive");
    }
    const std::size_t m = noise_.size();
    log_prior_.resize(m);
    inv_s2_.resize(m);
    gain_.resize(m);
    double largest = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double s2 = source_variance_ + noise_.variance(i);
        inv_s2_[i] = 1.0 / s2;
        gain_[i] = source_variance_ / s2;
        const double w = noise_.weight(i);
        log_prior_[i] = (w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity()) -
                        0.5 * std::log(2.0 * std::numbers::pi * s2);
        if (s2 > largest) {
            largest = s2;
            dominant_ = i;
        }
    }
}

double MixtureMmse::posterior(double y, double* mean_inv_s2, double* mean_gain_inv_s2) const {
    const double y2 = y * y;
    const std::size_t m = noise_.size();
    if (!std::isfinite(y2)) {
        if (mean_inv_s2 != nullptr) {
            *mean_inv_s2 = inv_s2_[dominant_];
        }
        if (mean_gain_inv_s2 != nullptr) {
            *mean_gain_inv_s2 = gain_[dominant_] * inv_s2_[dominant_];
        }
        return gain_[dominant_];
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        best = std::max(best, log_prior_[i] - 0.5 * y2 * inv_s2_[i]);
    }
    double den = 0.0;
    double num = 0.0;
    double s_inv = 0.0;
    double s_gain_inv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double p = std::exp(log_prior_[i] - 0.5 * y2 * inv_s2_[i] - best);
        den += p;
        num += gain_[i] * p;
        s_inv += inv_s2_[i] * p;
        s_gain_inv += gain_[i] * inv_s2_[i] * p;
    }
    if (mean_inv_s2 != nullptr) {
        *mean_inv_s2 = s_inv / den;
    }
    if (mean_gain_inv_s2 != nullptr) {
        *mean_gain_inv_s2 = s_gain_inv / den;
    }
    return num / den;
}

double MixtureMmse::operator()(double y) const {
    return posterior(y, nullptr, nullptr) * y;
}

double MixtureMmse::derivative(double y) const {
    double mean_inv = 0.0;
    double mean_gain_inv = 0.0;
    const double w = posterior(y, &mean_inv, &mean_gain_inv);
    // g = w(y) y, w' = y (E_p[1/s^2] E_p[c] - E_p[c/s^2]).
    return w + y * y * (mean_inv * w - mean_gain_inv);
}

double MixtureMmse::min_gain() const {
    return *std::min_element(gain_.begin(), gain_.end());
}

double MixtureMmse::max_gain() const {
    return *std::max_element(gain_.begin(), gain_.end());
}

Tabulated::Tabulated(std::vector<double> abscissae, std::vector<double> values)
    : abscissae_(std::move(abscissae)),
      values_(std::move(values)),
      clamp_events_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
    if (abscissae_.size() < 2 || abscissae_.size() != values_.size()) {
        throw std::invalid_argument("tabulated: need matching abscissae/values, length >= 2");
    }
    if (!std::is_sorted(abscissae_.begin(), abscissae_.end()) ||
        std::adjacent_find(abscissae_.begin(), abscissae_.end()) != abscissae_.end()) {
        throw std::invalid_argument("tabulated: abscissae must be strictly increasing");
    }
}

double Tabulated::operator()(double y) const {
    if (y <= abscissae_.front()) {
        if (y < abscissae_.front()) {
            clamp_events_->fetch_add(1, std::memory_order_relaxed);
        }
        return values_.front();
    }
    if (y >= abscissae_.back()) {
        if (y > abscissae_.back()) {
            clamp_events_->fetch_add(1, std::memory_order_relaxed);
        }
        return values_.back();
    }
    const auto it = std::upper_bound(abscissae_.begin(), abscissae_.end(), y);
    const std::size_t hi = static_cast<std::size_t>(it - abscissae_.begin());
    const double x0 = abscissae_[hi - 1];
    const double x1 = abscissae_[hi];
    const double t = (y - x0) / (x1 - x0);
    return values_[hi - 1] + t * (values_[hi] - values_[hi - 1]);
}

double Tabulated::derivative(double y) const {
    if (y <= abscissae_.front() || y >= abscissae_.back()) {
        return 0.0;
    }
    const auto it = std::upper_bound(abscissae_.begin(), abscissae_.end(), y);
    const std::size_t hi = static_cast<std::size_t>(it - abscissae_.begin());
    return (values_[hi] - values_[hi - 1]) / (abscissae_[hi] - abscissae_[hi - 1]);
}

namespace {

void check_threshold(double threshold) {
    if (!(threshold > 0.0)) {
        throw std::invalid_argument("nonlinearity: threshold must be positive");
    }
}

}  // namespace

double evaluate(const Nonlinearity& g, double y) {
    return std::visit(
        [y](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Identity>) {
                return y;
            } else if constexpr (std::is_same_v<T, Scale>) {
                return v.factor * y;
            } else if constexpr (std::is_same_v<T, SoftLimiter>) {
                check_threshold(v.threshold);
                return std::abs(y) < v.threshold ? y : std::copysign(v.threshold, y);
            } else if constexpr (std::is_same_v<T, Blanker>) {
                check_threshold(v.threshold);
                return std::abs(y) < v.threshold ? y : 0.0;
            } else {
                return v(y);
            }
        },
        g);
}

double derivative(const Nonlinearity& g, double y) {
    return std::visit(
        [y](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Identity>) {
                return 1.0;
            } else if constexpr (std::is_same_v<T, Scale>) {
                return v.factor;
            } else if constexpr (std::is_same_v<T, SoftLimiter>) {
                return std::abs(y) < v.threshold ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, Blanker>) {
                throw std::logic_error("derivative: blanker has jump discontinuities");
            } else {
                return v.derivative(y);
            }
        },
        g);
}

bool has_jump_discontinuity(const Nonlinearity& g) {
    return std::holds_alternative<Blanker>(g);
}

std::vector<double> breakpoints(const Nonlinearity& g) {
    return std::visit(
        [](const auto& v) -> std::vector<double> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SoftLimiter> || std::is_same_v<T, Blanker>) {
                return {-v.threshold, v.threshold};
            } else if constexpr (std::is_same_v<T, Tabulated>) {
                return v.abscissae();
            } else {
                return {};
            }
        },
        g);
}

const char* kind_name(const Nonlinearity& g) {
    return std::visit(
        [](const auto& v) -> const char* {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Identity>) {
                return "identity";
            } else if constexpr (std::is_same_v<T, Scale>) {
                return "scale";
            } else if constexpr (std::is_same_v<T, SoftLimiter>) {
                return "soft_limiter";
            } else if constexpr (std::is_same_v<T, Blanker>) {
                return "blanker";
            } else if constexpr (std::is_same_v<T, MixtureMmse>) {
                return "mixture_mmse";
            } else {
                return "tabulated";
            }
        },
        g);
}

Nonlinearity mixture_mmse(double source_variance, const MixtureSpec& noise) {
    return MixtureMmse(source_variance, noise);
}

namespace {

double blanker_mse(double threshold, double source_variance, const MixtureSpec& noise,
                   const QuadratureSettings& settings) {
    return mse_quadrature(Blanker{threshold}, source_variance, noise, settings).value;
}

}  // namespace

ThresholdSearch optimal_blanker_threshold(double source_variance, const MixtureSpec& noise,
                                          const QuadratureSettings& settings) {
    if (!(source_variance > 0.0)) {
        throw std::invalid_argument("optimal_blanker_threshold: source variance must be positive");
    }
    const double sigma_y = std::sqrt(source_variance + noise.total_variance());
    const double lo = 1e-3 * sigma_y;
    const double hi = 10.0 * sigma_y;
    auto objective = [&](double t) { return blanker_mse(t, source_variance, noise, settings); };

    auto log_grid = [&](int points) {
        std::vector<double> grid(points);
        const double step = std::log(hi / lo) / (points - 1);
        for (int i = 0; i < points; ++i) {
            grid[i] = lo * std::exp(step * i);
        }
        return grid;
    };

    constexpr int kCoarse = 33;
    const std::vector<double> coarse = log_grid(kCoarse);
    std::vector<double> mse(kCoarse);
    for (int i = 0; i < kCoarse; ++i) {
        mse[i] = objective(coarse[i]);
    }
    int interior_min = -1;
    int interior_count = 0;
    for (int i = 1; i + 1 < kCoarse; ++i) {
        if (mse[i] <= mse[i - 1] && mse[i] <= mse[i + 1]) {
            if (interior_min < 0 || mse[i] < mse[interior_min]) {
                interior_min = i;
            }
            ++interior_count;
        }
    }

    if (interior_min < 0 || interior_count > 1) {
        // Bracket failure: edge minimum or several candidate basins. Fall back
        // to a dense scan and report the best point with degraded confidence.
        const std::vector<double> dense = log_grid(200);
        ThresholdSearch best{dense[0], objective(dense[0]), true};
        for (std::size_t i = 1; i < dense.size(); ++i) {
            const double v = objective(dense[i]);
            if (v < best.mse) {
                best.threshold = dense[i];
                best.mse = v;
            }
        }
        return best;
    }

    double a = coarse[interior_min - 1];
    double b = coarse[interior_min + 1];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while ((b - a) > 1e-6 * b) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2);
        }
    }
    const double threshold = 0.5 * (a + b);
    return {threshold, objective(threshold), false};
}

}  // namespace bussgang
