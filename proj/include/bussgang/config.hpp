#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bussgang/gains.hpp"

namespace bussgang {

using Json = nlohmann::ordered_json;

/// Thrown on malformed experiment configs, with the offending field in the
/// message.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Declarative distribution fragment. Variance may stay unset in sweep
/// configs where the sweep variable fixes it per grid point.
struct DistributionConfig {
    std::string kind;  // gaussian | laplace | uniform | triangular | class_a | mixture
    std::optional<double> variance;
    double class_a_index = 0.0;
    double class_a_gamma = 0.0;
    double class_a_mass_tolerance = 1e-12;
    std::vector<double> weights;     // explicit mixture
    std::vector<double> variances;   // explicit mixture

    /// Materializes the fragment at the given total variance. Explicit
    /// mixtures are rescaled component-wise to hit the target.
    ScalarDistribution resolve(double target_variance) const;
};

struct NonlinearityConfig {
    std::string kind = "identity";  // identity | scale | soft_limiter | blanker | mixture_mmse | tabulated
    double factor = 1.0;
    double threshold = 0.0;
    bool optimal_threshold = false;  // blanker with y_th = "mmse_optimal"
    std::vector<double> abscissae;
    std::vector<double> values;
};

struct SweepSpec {
    std::string variable;  // rho_p | snr_db | y_th
    std::vector<double> grid;
    double total_power = 10.0;  // P_Y for rho_p sweeps
};

struct EngineSettings {
    std::int64_t samples = 1'000'000;
    int batches = 100;
    std::uint64_t seed = 1;
    double quad_rel_tol = 1e-10;
    double support_multiple = 10.0;
    bool serial = false;

    McSettings mc() const;
    QuadratureSettings quadrature() const;
};

struct OutputSettings {
    bool mutual_information = false;
    int mi_bins = 512;
    double mi_range_multiple = 8.0;
    std::int64_t mi_samples = 0;  // 0: use engine samples
};

struct ExperimentConfig {
    std::string name;
    std::string description;
    DistributionConfig source;
    DistributionConfig noise;
    double correlation = 0.0;
    std::vector<NonlinearityConfig> nonlinearities;
    SweepSpec sweep;
    EngineSettings engine;
    OutputSettings output;
    Json raw;  // original document, echoed into output headers
};

ExperimentConfig parse_experiment(const Json& doc);
ExperimentConfig load_experiment(const std::string& path);

/// One grid point materialized into a runnable scenario.
struct ResolvedPoint {
    Scenario scenario;
    std::string g_label;
    std::vector<std::string> flags;
};

ResolvedPoint resolve_point(const ExperimentConfig& config, double sweep_value,
                            const NonlinearityConfig& g_config);

/// Single-fragment (de)serialization, the schema the CLI configs use.
Json distribution_to_json(const DistributionConfig& d);
DistributionConfig distribution_from_json(const Json& j);
Json nonlinearity_to_json(const NonlinearityConfig& g);
NonlinearityConfig nonlinearity_from_json(const Json& j);

}  // namespace bussgang
