#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "bussgang/parallel.hpp"
#include "bussgang/rng.hpp"

namespace bussgang {

/// Zero-mean Gaussian density G(x; variance).
double gaussian_pdf(double x, double variance);

/// Zero-mean Gaussian mixture: weights are probability masses, one variance
/// per component. Immutable after construction.
class MixtureSpec {
  public:
    MixtureSpec(std::vector<double> weights, std::vector<double> variances);

    std::size_t size() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& variances() const { return variances_; }
    double weight(std::size_t l) const { return weights_[l]; }
    double variance(std::size_t l) const { return variances_[l]; }

    /// Sum of weight * component variance.
    double total_variance() const;

    double pdf(double x) const;

  private:
    std::vector<double> weights_;
    std::vector<double> variances_;
};

/// Middleton Class-A canonical parameters. `impulsive_index` is A,
/// `gamma` is the AWGN-to-impulsive power ratio.
struct ClassAParams {
    double impulsive_index = 0.0;
    double gamma = 0.0;
    double total_variance = 0.0;
    double mass_tolerance = 1e-12;
};

/// Expands Class-A parameters into a finite mixture: Poisson weights
/// e^{-A} A^l / l!, component variances (l/A + Gamma)/(1 + Gamma) * variance.
/// Components are kept until the retained Poisson mass reaches
/// 1 - mass_tolerance, then the weights are renormalized.
/// Throws std::runtime_error if 10^4 components are not enough.
MixtureSpec class_a_mixture(const ClassAParams& params);

/// The scalar laws used throughout: all zero-mean, parameterized by variance.
class ScalarDistribution {
  public:
    enum class Kind { gaussian, mixture, laplace, uniform, triangular };

    static ScalarDistribution gaussian(double variance);
    static ScalarDistribution mixture(MixtureSpec mix);
    static ScalarDistribution laplace(double variance);
    static ScalarDistribution uniform(double variance);
    static ScalarDistribution triangular(double variance);

    Kind kind() const { return kind_; }
    bool is_gaussian() const { return kind_ == Kind::gaussian; }
    double variance() const { return variance_; }
    const MixtureSpec& mixture_spec() const;

    double pdf(double x) const;

    /// Characteristic function with the E{e^{j 2 pi X u}} convention.
    /// All cataloged laws are symmetric, so values are real; the imaginary
    /// part is kept in the signature for API completeness.
    std::complex<double> char_function(double u) const;
    std::vector<std::complex<double>> char_function(std::span<const double> u_grid) const;

    /// One variate from the given substream.
    double draw(CounterRng& rng) const;

    /// n variates, deterministic for a given (seed, n) regardless of the
    /// execution policy or thread count: values are generated in fixed-size
    /// chunks, one Philox substream per chunk.
    std::vector<double> sample(std::int64_t n, std::uint64_t seed,
                               Exec exec = Exec::parallel) const;

  private:
    ScalarDistribution(Kind kind, double variance, MixtureSpec mix);

    Kind kind_;
    double variance_;
    MixtureSpec mixture_;
};

const char* kind_name(ScalarDistribution::Kind kind);

}  // namespace bussgang
