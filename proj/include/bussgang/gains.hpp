#pragma once

#include <array>
#include <optional>
#include <vector>

#include "bussgang/distributions.hpp"
#include "bussgang/expectations.hpp"
#include "bussgang/nonlinearities.hpp"

namespace bussgang {

/// One experiment: output Z = g(X + N). The correlation is the Gaussian-pair
/// coefficient rho_XN and must be zero unless both marginals are Gaussian.
struct Scenario {
    Scenario(ScalarDistribution source, ScalarDistribution noise, double correlation,
             Nonlinearity g);

    ScalarDistribution source;
    ScalarDistribution noise;
    double correlation;
    Nonlinearity g;

    double source_power() const { return source.variance(); }
    double noise_power() const { return noise.variance(); }
    /// P_X + P_N + 2 E{XN}.
    double total_power() const;

    /// One joint (x, n) draw; correlated Gaussian pairs come from the 2x2
    /// covariance factorization.
    void draw_xn(CounterRng& rng, double& x, double& n) const;
};

/// The regression-coefficient triple with per-component breakdown when the
/// analytic mixture route produced one (row-major (l, j) for double mixtures).
struct GainSet {
    Estimate k_y;
    Estimate k_x;
    Estimate k_n;
    std::vector<double> per_component;
};

/// k_y = E{g(Y) Y} / sigma_y^2 for Gaussian Y, by single-folded quadrature.
Estimate gain_gaussian(const Nonlinearity& g, double sigma_y2,
                       const QuadratureSettings& settings = {});

/// Gaussian source, mixture noise: per-component gains k^(l) at
/// sigma_x^2 + sigma_{N,l}^2 combined as
///   k_y = sum_l beta_l (sigma_{Y,l}^2 / sigma_y^2) k^(l)
///   k_x = sum_l beta_l k^(l)
///   k_n = sum_l beta_l (sigma_{N,l}^2 / sigma_n^2) k^(l).
GainSet gains_mixture(const Nonlinearity& g, double source_variance, const MixtureSpec& noise,
                      const QuadratureSettings& settings = {});

/// Both inputs mixtures: double sums over component pairs (l, j) with
/// sigma_{Y,(l,j)}^2 = sigma_{X,l}^2 + sigma_{N,j}^2. Component count capped
/// at 10^4 pairs.
GainSet gains_double_mixture(const Nonlinearity& g, const MixtureSpec& source,
                             const MixtureSpec& noise,
                             const QuadratureSettings& settings = {});

/// E{g'(Y)} over Gaussian Y: the derivative route to the same gain, used as
/// an independent cross-check. Refuses nonlinearities with jumps, where the
/// identity needs distributional terms.
Estimate gain_from_derivative(const Nonlinearity& g, double sigma_y2,
                              const QuadratureSettings& settings = {});

/// Sample-moment order for the empirical batches.
enum Moment : std::size_t {
    kZX = 0,
    kZY = 1,
    kZN = 2,
    kXX = 3,
    kYY = 4,
    kNN = 5,
    kXY = 6,
    kXN = 7,
    kZZ = 8,
    kMomentCount = 9,
};

using MomentBatches = std::vector<std::array<double, kMomentCount>>;

/// Per-batch means of the joint sample moments, batches in fixed order.
MomentBatches empirical_batch_moments(const Scenario& scenario, const McSettings& mc,
                                      StreamDomain domain = StreamDomain::mc_expect);

/// Brute-force gains: batched sample-moment ratios with batch-means standard
/// errors. Works for any scenario; this is the oracle the analytic routes are
/// checked against.
GainSet gains_empirical(const Scenario& scenario, const McSettings& mc = {});

GainSet gains_from_moments(const MomentBatches& batches);

/// Analytic gains when the scenario admits them: Gaussian/Gaussian (any
/// correlation, via the cross-moment identity), Gaussian/mixture and
/// mixture/mixture (component decompositions). Empty otherwise.
std::optional<GainSet> analytic_gains(const Scenario& scenario,
                                      const QuadratureSettings& settings = {});

}  // namespace bussgang
