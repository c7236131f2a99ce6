#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bussgang/gains.hpp"
#include "bussgang/metrics.hpp"

namespace bussgang {

/// Outcome of one numerical theorem check. `statistic` is the max deviation
/// (standardized for statistical checks, absolute for algebraic ones) and
/// `passed` is exactly `statistic <= tolerance`.
struct CheckReport {
    std::string name;
    bool passed = false;
    double statistic = 0.0;
    double tolerance = 0.0;
    std::vector<std::pair<std::string, double>> diagnostics;
};

/// Conditional-mean linearity check: bins Y into equal-probability bins and
/// compares the bin-conditional means of X against alpha_hat * y.
struct CondLinearityReport {
    std::string name;
    bool passed = false;
    double alpha_hat = 0.0;
    double alpha_hat_se = 0.0;
    double alpha_theory = 0.0;
    double max_bin_deviation = 0.0;  // in standard errors
    double bin_tolerance = 5.0;
    int bins_used = 0;
    int bins_dropped = 0;
    std::vector<double> bin_centers;
    std::vector<double> bin_means;
    std::vector<double> bin_std_errors;
};

CondLinearityReport check_conditional_linearity(const Scenario& scenario, int bins,
                                                const McSettings& mc);

/// Characteristic-function condition C_X^{1-alpha}(u) = C_N^{alpha}(u) with
/// alpha = P_X / (P_X + P_N), checked pointwise on a symmetric grid. Real
/// powers only: the grid is clipped at the first zero crossing of either
/// characteristic function (uniform/triangular case) and the clipping is
/// recorded. Fewer than 16 usable points makes the check inconclusive.
struct CharConditionReport {
    std::string name;
    bool passed = false;
    bool inconclusive = false;
    bool grid_clipped = false;
    double alpha = 0.0;
    double max_deviation = 0.0;
    double tolerance = 1e-9;
    int points_used = 0;
};

CharConditionReport check_char_condition(const ScalarDistribution& x,
                                         const ScalarDistribution& n,
                                         std::span<const double> u_grid);

/// Symmetric grid of `points` values covering +/- 0.75 / max(sigma_x, sigma_n),
/// dense enough to survive clipping at the first characteristic-function zero.
std::vector<double> default_char_grid(const ScalarDistribution& x,
                                      const ScalarDistribution& n, int points = 64);

/// Empirical equal-gain check: max standardized |k_y - k_x|, |k_y - k_n|
/// against 4 SE. Also evaluates the residual-correlation identities
/// E{W_y X} = (k_x - k_y) P_X and E{W_y X} = -E{W_y N} (diagnostics).
CheckReport check_equal_gain(const Scenario& scenario, const McSettings& mc);

/// Scaled-input identity for Y = a_x X + a_n N with Gaussian X, N:
/// E{ZY}/s_y^2 = (1/a_x) E{ZX}/s_x^2 = (1/a_n) E{ZN}/s_n^2 within 5 SE.
CheckReport check_scaling_lemma_pair(double a_x, double a_n, double sigma_x2, double sigma_n2,
                                     const Nonlinearity& g, const McSettings& mc);

/// Same for Y = sum_j a_j X_j, verified per component.
CheckReport check_scaling_lemma_sum(std::span<const double> alphas,
                                    std::span<const double> variances, const Nonlinearity& g,
                                    const McSettings& mc);

/// Randomized algebraic check that 1 + SNR_x >= sigma_x^2 / MSE, i.e. the
/// SNR capacity bound is at least as tight as the MSE one. Exact comparison,
/// no tolerance.
CheckReport check_bound_ordering(int n_trials, std::uint64_t seed);

}  // namespace bussgang
