#pragma once

#include <cstdint>

#include "bussgang/gains.hpp"

namespace bussgang {

enum class CapacityUnit { nats, bits };

/// SNR, MSE and capacity lower bounds for one scenario, all derived from
/// (k_x, k_y, E{g^2(Y)}, sigma_x^2, sigma_n^2). Capacities are stored in the
/// unit recorded in `unit` (nats here; serialization converts).
///
/// A k_x too small to divide by marks the k_x-derived fields degenerate
/// (NaN) instead of letting them blow up to +/-inf.
struct MetricSet {
    double k_x = 0.0;
    double k_y = 0.0;
    Estimate e_g2;
    double sigma_x2 = 0.0;
    double sigma_n2 = 0.0;

    double snr_x = 0.0;
    double snr_y = 0.0;
    double mse = 0.0;
    double mse_u = 0.0;
    double residual_power_wx = 0.0;

    double c_snr_x = 0.0;
    double c_snr_y = 0.0;
    double c_mse = 0.0;
    double c_awgn = 0.0;
    CapacityUnit unit = CapacityUnit::nats;

    bool degenerate_kx = false;
    bool degenerate_ky = false;
    /// True when e_g2 came from quadrature rather than Monte Carlo.
    bool analytic_e_g2 = false;
};

/// E{g^2(Y)}: quadrature over the Gaussian or mixture law of Y when the
/// scenario admits one, otherwise seeded Monte Carlo.
Estimate output_second_moment(const Scenario& scenario,
                              const QuadratureSettings& quad = {},
                              const McSettings& mc = {}, bool* analytic = nullptr);

/// Assembles the metric set from precomputed gains. The same E{g^2} value
/// feeds every formula, so the SNR/MSE link holds by construction.
MetricSet metric_set(const Scenario& scenario, const GainSet& gains,
                     const QuadratureSettings& quad = {}, const McSettings& mc = {});

/// Estimation MSE of g applied to X + N for a Gaussian source in mixture
/// noise, fully by quadrature: E{g^2} + (1 - 2 k_x) sigma_x^2.
Estimate mse_quadrature(const Nonlinearity& g, double source_variance,
                        const MixtureSpec& noise, const QuadratureSettings& settings = {});

struct MiEstimate {
    double value = 0.0;  // nats
    std::int64_t n_samples = 0;
    int bins_per_axis = 0;
    double range_multiple = 0.0;
};

/// Plug-in mutual information between X and Z = g(X+N) from a 2-D histogram
/// over [-range_multiple sigma, +range_multiple sigma]^2 (per-axis sigma),
/// with the Miller-Madow occupancy correction. Out-of-range samples clamp
/// into the edge bins; empty cells contribute zero. Counts are integers, so
/// the merge across threads is exact and the estimate is deterministic for a
/// fixed seed.
MiEstimate mutual_information_histogram(const Scenario& scenario, int bins_per_axis,
                                        double range_multiple, const McSettings& mc);

/// Coefficients of the best linear estimates of X, N and Y from the output
/// Z: X_hat = x_coef * Z etc. The Y coefficient always equals the sum of the
/// other two when the gains satisfy the power decomposition identity.
struct LinearEstimates {
    double x_coef = 0.0;
    double n_coef = 0.0;
    double y_coef = 0.0;
    bool degenerate = false;  // sigma_z^2 ~ 0
};

LinearEstimates linear_estimates_from_output(const Scenario& scenario, const GainSet& gains,
                                             const QuadratureSettings& quad = {},
                                             const McSettings& mc = {});

}  // namespace bussgang
