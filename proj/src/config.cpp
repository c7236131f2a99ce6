#include "bussgang/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace bussgang {

McSettings EngineSettings::mc() const {
    McSettings mc;
    mc.n_samples = samples;
    mc.n_batches = batches;
    mc.seed = seed;
    mc.exec = serial ? Exec::serial : Exec::parallel;
    return mc;
}

QuadratureSettings EngineSettings::quadrature() const {
    QuadratureSettings q;
    q.relative_tolerance = quad_rel_tol;
    q.support_multiple = support_multiple;
    return q;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

double number_at(const Json& j, const std::string& field, std::optional<double> fallback = {}) {
    if (!j.contains(field)) {
        if (fallback) {
            return *fallback;
        }
        fail(field, "missing");
    }
    if (!j[field].is_number()) {
        fail(field, "expected a number");
    }
    return j[field].get<double>();
}

std::vector<double> numbers_at(const Json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_array()) {
        fail(field, "expected an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : j[field]) {
        if (!v.is_number()) {
            fail(field, "expected an array of numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

ScalarDistribution DistributionConfig::resolve(double target_variance) const {
    if (!(target_variance > 0.0)) {
        throw ConfigError("distribution: resolved variance must be positive");
    }
    if (kind == "gaussian") {
        return ScalarDistribution::gaussian(target_variance);
    }
    if (kind == "laplace") {
        return ScalarDistribution::laplace(target_variance);
    }
    if (kind == "uniform") {
        return ScalarDistribution::uniform(target_variance);
    }
    if (kind == "triangular") {
        return ScalarDistribution::triangular(target_variance);
    }
    if (kind == "class_a") {
        ClassAParams params;
        params.impulsive_index = class_a_index;
        params.gamma = class_a_gamma;
        params.total_variance = target_variance;
        params.mass_tolerance = class_a_mass_tolerance;
        return ScalarDistribution::mixture(class_a_mixture(params));
    }
    if (kind == "mixture") {
        MixtureSpec spec(weights, variances);
        const double scale = target_variance / spec.total_variance();
        std::vector<double> scaled = variances;
        for (double& v : scaled) {
            v *= scale;
        }
        return ScalarDistribution::mixture(MixtureSpec(weights, std::move(scaled)));
    }
    throw ConfigError("distribution: unknown kind '" + kind + "'");
}

Json distribution_to_json(const DistributionConfig& d) {
    Json j;
    j["kind"] = d.kind;
    if (d.kind == "class_a") {
        j["A"] = d.class_a_index;
        j["gamma"] = d.class_a_gamma;
    }
    if (d.kind == "mixture") {
        j["weights"] = d.weights;
        j["variances"] = d.variances;
    }
    if (d.variance) {
        j["variance"] = *d.variance;
    }
    return j;
}

DistributionConfig distribution_from_json(const Json& j) {
    DistributionConfig d;
    if (!j.contains("kind") || !j["kind"].is_string()) {
        fail("kind", "distribution fragment needs a string kind");
    }
    d.kind = j["kind"].get<std::string>();
    if (j.contains("variance")) {
        d.variance = number_at(j, "variance");
    }
    if (d.kind == "class_a") {
        d.class_a_index = number_at(j, "A");
        d.class_a_gamma = number_at(j, "gamma");
        d.class_a_mass_tolerance = number_at(j, "mass_tolerance", 1e-12);
    } else if (d.kind == "mixture") {
        d.weights = numbers_at(j, "weights");
        d.variances = numbers_at(j, "variances");
    } else if (d.kind != "gaussian" && d.kind != "laplace" && d.kind != "uniform" &&
               d.kind != "triangular") {
        fail("kind", "unknown distribution '" + d.kind + "'");
    }
    return d;
}

Json nonlinearity_to_json(const NonlinearityConfig& g) {
    Json j;
    j["kind"] = g.kind;
    if (g.kind == "scale") {
        j["a"] = g.factor;
    } else if (g.kind == "soft_limiter") {
        j["y_th"] = g.threshold;
    } else if (g.kind == "blanker") {
        if (g.optimal_threshold) {
            j["y_th"] = "mmse_optimal";
        } else {
            j["y_th"] = g.threshold;
        }
    } else if (g.kind == "tabulated") {
        j["abscissae"] = g.abscissae;
        j["values"] = g.values;
    }
    return j;
}

NonlinearityConfig nonlinearity_from_json(const Json& j) {
    NonlinearityConfig g;
    if (!j.contains("kind") || !j["kind"].is_string()) {
        fail("kind", "nonlinearity fragment needs a string kind");
    }
    g.kind = j["kind"].get<std::string>();
    if (g.kind == "scale") {
        g.factor = number_at(j, "a");
    } else if (g.kind == "soft_limiter") {
        g.threshold = number_at(j, "y_th");
    } else if (g.kind == "blanker") {
        if (j.contains("y_th") && j["y_th"].is_string()) {
            if (j["y_th"].get<std::string>() != "mmse_optimal") {
                fail("y_th", "blanker threshold must be a number or \"mmse_optimal\"");
            }
            g.optimal_threshold = true;
        } else {
            g.threshold = number_at(j, "y_th");
        }
    } else if (g.kind == "tabulated") {
        g.abscissae = numbers_at(j, "abscissae");
        g.values = numbers_at(j, "values");
    } else if (g.kind != "identity" && g.kind != "mixture_mmse") {
        fail("kind", "unknown nonlinearity '" + g.kind + "'");
    }
    return g;
}

ExperimentConfig parse_experiment(const Json& doc) {
    ExperimentConfig config;
    config.raw = doc;
    if (!doc.contains("name") || !doc["name"].is_string()) {
        fail("name", "missing experiment name");
    }
    config.name = doc["name"].get<std::string>();
    if (doc.contains("description")) {
        config.description = doc["description"].get<std::string>();
    }

    if (!doc.contains("scenario") || !doc["scenario"].is_object()) {
        fail("scenario", "missing");
    }
    const Json& scenario = doc["scenario"];
    if (!scenario.contains("source") || !scenario.contains("noise")) {
        fail("scenario", "needs source and noise fragments");
    }
    config.source = distribution_from_json(scenario["source"]);
    config.noise = distribution_from_json(scenario["noise"]);
    config.correlation = number_at(scenario, "correlation", 0.0);
    if (!scenario.contains("g")) {
        fail("scenario.g", "missing");
    }
    if (scenario["g"].is_array()) {
        for (const auto& item : scenario["g"]) {
            config.nonlinearities.push_back(nonlinearity_from_json(item));
        }
    } else {
        config.nonlinearities.push_back(nonlinearity_from_json(scenario["g"]));
    }
    if (config.nonlinearities.empty()) {
        fail("scenario.g", "needs at least one nonlinearity");
    }

    if (!doc.contains("sweep") || !doc["sweep"].is_object()) {
        fail("sweep", "missing");
    }
    const Json& sweep = doc["sweep"];
    if (!sweep.contains("variable") || !sweep["variable"].is_string()) {
        fail("sweep.variable", "missing");
    }
    config.sweep.variable = sweep["variable"].get<std::string>();
    if (config.sweep.variable != "rho_p" && config.sweep.variable != "snr_db" &&
        config.sweep.variable != "y_th") {
        fail("sweep.variable", "must be rho_p, snr_db or y_th");
    }
    config.sweep.grid = numbers_at(sweep, "grid");
    if (config.sweep.grid.empty()) {
        fail("sweep.grid", "must be nonempty");
    }
    for (std::size_t i = 1; i < config.sweep.grid.size(); ++i) {
        if (!(config.sweep.grid[i] > config.sweep.grid[i - 1])) {
            fail("sweep.grid", "must be strictly increasing");
        }
    }
    config.sweep.total_power = number_at(sweep, "total_power", 10.0);

    if (doc.contains("engine")) {
        const Json& engine = doc["engine"];
        config.engine.samples =
            static_cast<std::int64_t>(number_at(engine, "samples", 1e6));
        config.engine.batches = static_cast<int>(number_at(engine, "batches", 100));
        config.engine.seed = static_cast<std::uint64_t>(number_at(engine, "seed", 1));
        config.engine.quad_rel_tol = number_at(engine, "quad_rel_tol", 1e-10);
        config.engine.support_multiple = number_at(engine, "support_multiple", 10.0);
        if (engine.contains("serial")) {
            config.engine.serial = engine["serial"].get<bool>();
        }
    }
    if (doc.contains("output")) {
        const Json& output = doc["output"];
        if (output.contains("mutual_information")) {
            config.output.mutual_information = output["mutual_information"].get<bool>();
        }
        config.output.mi_bins = static_cast<int>(number_at(output, "mi_bins", 512));
        config.output.mi_range_multiple = number_at(output, "mi_range_multiple", 8.0);
        config.output.mi_samples =
            static_cast<std::int64_t>(number_at(output, "mi_samples", 0));
    }
    return config;
}

ExperimentConfig load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("parse error in ") + path + ": " + e.what());
    }
    return parse_experiment(doc);
}

ResolvedPoint resolve_point(const ExperimentConfig& config, double sweep_value,
                            const NonlinearityConfig& g_config) {
    double p_x = 0.0;
    double p_n = 0.0;
    double threshold_override = -1.0;
    if (config.sweep.variable == "rho_p") {
        const double rho_p = sweep_value;
        if (!(rho_p > 0.0 && rho_p < 1.0)) {
            throw ConfigError("rho_p grid values must lie in (0, 1)");
        }
        // P_Y = S + 2 rho_xn S sqrt(rho_p (1-rho_p)) with S = P_X + P_N.
        const double s = config.sweep.total_power /
                         (1.0 + 2.0 * config.correlation * std::sqrt(rho_p * (1.0 - rho_p)));
        p_x = rho_p * s;
        p_n = (1.0 - rho_p) * s;
    } else if (config.sweep.variable == "snr_db") {
        p_n = config.noise.variance.value_or(1.0);
        p_x = std::pow(10.0, sweep_value / 10.0) * p_n;
    } else {  // y_th
        if (!config.source.variance || !config.noise.variance) {
            throw ConfigError("y_th sweeps need explicit source/noise variances");
        }
        p_x = *config.source.variance;
        p_n = *config.noise.variance;
        threshold_override = sweep_value;
    }

    ScalarDistribution source = config.source.resolve(p_x);
    ScalarDistribution noise = config.noise.resolve(p_n);

    auto noise_as_mixture = [&noise, &g_config, p_n]() -> MixtureSpec {
        if (noise.kind() == ScalarDistribution::Kind::mixture) {
            return noise.mixture_spec();
        }
        if (noise.kind() == ScalarDistribution::Kind::gaussian) {
            return MixtureSpec({1.0}, {p_n});
        }
        throw ConfigError("nonlinearity '" + g_config.kind +
                          "' needs Gaussian or mixture noise to resolve");
    };

    std::vector<std::string> flags;
    std::string label = g_config.kind;
    Nonlinearity g = Identity{};
    if (g_config.kind == "identity") {
        g = Identity{};
    } else if (g_config.kind == "scale") {
        g = Scale{g_config.factor};
    } else if (g_config.kind == "soft_limiter") {
        const double th = threshold_override > 0.0 ? threshold_override : g_config.threshold;
        g = SoftLimiter{th};
    } else if (g_config.kind == "blanker") {
        double th = threshold_override > 0.0 ? threshold_override : g_config.threshold;
        if (g_config.optimal_threshold && threshold_override <= 0.0) {
            const ThresholdSearch search = optimal_blanker_threshold(p_x, noise_as_mixture());
            th = search.threshold;
            char buf[64];
            std::snprintf(buf, sizeof(buf), "y_th=%.6g", th);
            flags.emplace_back(buf);
            if (search.degraded) {
                flags.emplace_back("threshold_scan_fallback");
            }
        }
        g = Blanker{th};
    } else if (g_config.kind == "mixture_mmse") {
        g = mixture_mmse(p_x, noise_as_mixture());
    } else if (g_config.kind == "tabulated") {
        g = Tabulated(g_config.abscissae, g_config.values);
    } else {
        throw ConfigError("unknown nonlinearity kind '" + g_config.kind + "'");
    }

    return ResolvedPoint{Scenario(std::move(source), std::move(noise), config.correlation, std::move(g)),
                         std::move(label), std::move(flags)};
}

}  // namespace bussgang
