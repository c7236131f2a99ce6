#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "bussgang/distributions.hpp"
#include "bussgang/expectations.hpp"

namespace bussgang {

struct Identity {};

struct Scale {
    double factor = 1.0;
};

/// Identity inside +/- threshold, hard saturation at +/- threshold outside.
struct SoftLimiter {
    double threshold = 1.0;
};

/// Identity on |y| < threshold, exactly zero on |y| >= threshold.
struct Blanker {
    double threshold = 1.0;
};

/// Conditional-mean estimator of a Gaussian source in zero-mean
/// Gaussian-mixture noise:
///
///   g(y) = y * sum_m c_m b_m G(y; s_m^2) / sum_m b_m G(y; s_m^2),
///   s_m^2 = source_variance + noise_variance_m,  c_m = source_variance / s_m^2.
///
/// Posterior weights are evaluated in log space with max-subtraction because
/// Class-A priors span hundreds of orders of magnitude. When even that cannot
/// be formed (y^2 overflows), the largest-variance component dominates the
/// tail and its gain is used.
class MixtureMmse {
  public:
    MixtureMmse(double source_variance, MixtureSpec noise);

    double operator()(double y) const;
    double derivative(double y) const;

    double source_variance() const { return source_variance_; }
    const MixtureSpec& noise() const { return noise_; }
    double min_gain() const;
    double max_gain() const;

  private:
    double posterior(double y, double* mean_inv_s2, double* mean_gain_inv_s2) const;

    double source_variance_;
    MixtureSpec noise_;
    std::vector<double> log_prior_;  // log b_m - 0.5 log(2 pi s_m^2)
    std::vector<double> inv_s2_;
    std::vector<double> gain_;
    std::size_t dominant_ = 0;  // largest s_m^2: the surviving tail component
};

/// Piecewise-linear interpolation through (abscissa, value) pairs. Evaluation
/// outside the hull clamps to the end values and bumps a shared event
/// counter so callers can notice.
class Tabulated {
  public:
    Tabulated(std::vector<double> abscissae, std::vector<double> values);

    double operator()(double y) const;
    double derivative(double y) const;
    const std::vector<double>& abscissae() const { return abscissae_; }
    std::uint64_t clamp_events() const { return *clamp_events_; }

  private:
    std::vector<double> abscissae_;
    std::vector<double> values_;
    std::shared_ptr<std::atomic<std::uint64_t>> clamp_events_;
};

using Nonlinearity = std::variant<Identity, Scale, SoftLimiter, Blanker, MixtureMmse, Tabulated>;

double evaluate(const Nonlinearity& g, double y);

/// Pointwise derivative, defined almost everywhere. Invalid for
/// nonlinearities with jump discontinuities (see has_jump_discontinuity).
double derivative(const Nonlinearity& g, double y);

bool has_jump_discontinuity(const Nonlinearity& g);

/// Abscissae where g or g' is discontinuous; quadrature panels split here.
std::vector<double> breakpoints(const Nonlinearity& g);

const char* kind_name(const Nonlinearity& g);

/// Builds the conditional-mean estimator for the given source power and
/// mixture noise.
Nonlinearity mixture_mmse(double source_variance, const MixtureSpec& noise);

struct ThresholdSearch {
    double threshold = 0.0;
    double mse = 0.0;
    /// Set when the coarse scan saw no single interior minimum and the result
    /// is the best candidate of a 200-point log-spaced scan instead.
    bool degraded = false;
};

/// MSE-optimal blanking threshold for a Gaussian source in mixture noise.
/// Coarse log-grid bracketing over [1e-3 sigma_y, 10 sigma_y] followed by
/// golden-section refinement to 1e-6 relative on the threshold.
ThresholdSearch optimal_blanker_threshold(double source_variance, const MixtureSpec& noise,
                                          const QuadratureSettings& settings = {});

}  // namespace bussgang
