#include "bussgang/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace bussgang {

const char* const kCsvHeader =
    "sweep_variable,sweep_value,g,k_y,k_y_se,k_x,k_x_se,k_n,k_n_se,"
    "snr_x,snr_y,mse,mse_u,c_snr_x,c_snr_y,c_mse,c_awgn,mi,flags";

std::uint64_t point_seed(std::uint64_t seed, std::size_t point_index, std::size_t g_index) {
    // splitmix64 over (seed, point, g) so grid points draw fresh randomness.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (1 + point_index * 64 + g_index);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& config) {
    std::vector<ResultRow> rows;
    rows.reserve(config.sweep.grid.size() * config.nonlinearities.size());
    for (std::size_t p = 0; p < config.sweep.grid.size(); ++p) {
        for (std::size_t gi = 0; gi < config.nonlinearities.size(); ++gi) {
            ResultRow row;
            row.sweep_value = config.sweep.grid[p];
            row.g_label = config.nonlinearities[gi].kind;
            try {
                const ResolvedPoint point =
                    resolve_point(config, row.sweep_value, config.nonlinearities[gi]);
                row.flags = point.flags;

                McSettings mc = config.engine.mc();
                mc.seed = point_seed(config.engine.seed, p, gi);
                const QuadratureSettings quad = config.engine.quadrature();

                row.gains = gains_empirical(point.scenario, mc);

                const std::optional<GainSet> analytic = analytic_gains(point.scenario, quad);
                const GainSet& metric_gains = analytic ? *analytic : row.gains;
                row.flags.emplace_back(analytic ? "metrics=quadrature" : "metrics=mc");
                row.metrics = metric_set(point.scenario, metric_gains, quad, mc);

                if (config.output.mutual_information) {
                    McSettings mi_mc = mc;
                    if (config.output.mi_samples > 0) {
                        mi_mc.n_samples = config.output.mi_samples;
                    }
                    row.mi_nats = mutual_information_histogram(
                                      point.scenario, config.output.mi_bins,
                                      config.output.mi_range_multiple, mi_mc)
                                      .value;
                }
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string number_or_na(double v) {
    if (std::isnan(v)) {
        return "NA";
    }
    return format_number(v);
}

constexpr double kNatsToBits = 1.4426950408889634;  // 1 / ln 2

std::string flags_field(const ResultRow& row) {
    if (row.failed) {
        return "error:" + row.error;
    }
    if (row.flags.empty()) {
        return "ok";
    }
    std::string joined;
    for (std::size_t i = 0; i < row.flags.size(); ++i) {
        if (i > 0) {
            joined += ';';
        }
        joined += row.flags[i];
    }
    return joined;
}

}  // namespace

void write_csv(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
               std::ostream& out) {
    out << "# bussgang sweep: " << config.name << "\n";
    if (!config.description.empty()) {
        out << "# " << config.description << "\n";
    }
    out << "# config: " << config.raw.dump() << "\n";
    out << "# capacity unit: bits\n";
    out << kCsvHeader << "\n";
    for (const ResultRow& row : rows) {
        out << config.sweep.variable << ',' << format_number(row.sweep_value) << ','
            << row.g_label << ',';
        if (row.failed) {
            for (int i = 0; i < 15; ++i) {
                out << "NA,";
            }
            out << flags_field(row) << "\n";
            continue;
        }
        const MetricSet& m = row.metrics;
        out << format_number(row.gains.k_y.value) << ',' << format_number(row.gains.k_y.std_error)
            << ',' << format_number(row.gains.k_x.value) << ','
            << format_number(row.gains.k_x.std_error) << ',' << format_number(row.gains.k_n.value)
            << ',' << format_number(row.gains.k_n.std_error) << ',' << number_or_na(m.snr_x) << ','
            << number_or_na(m.snr_y) << ',' << number_or_na(m.mse) << ',' << number_or_na(m.mse_u)
            << ',' << number_or_na(m.c_snr_x * kNatsToBits) << ','
            << number_or_na(m.c_snr_y * kNatsToBits) << ',' << number_or_na(m.c_mse * kNatsToBits)
            << ',' << number_or_na(m.c_awgn * kNatsToBits) << ','
            << (row.mi_nats ? format_number(*row.mi_nats * kNatsToBits) : "NA") << ','
            << flags_field(row) << "\n";
    }
}

void write_json_lines(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
                      std::ostream& out) {
    for (const ResultRow& row : rows) {
        Json j;
        j["experiment"] = config.name;
        j["sweep_variable"] = config.sweep.variable;
        j["sweep_value"] = row.sweep_value;
        j["g"] = row.g_label;
        if (row.failed) {
            j["error"] = row.error;
            out << j.dump() << "\n";
            continue;
        }
        auto put = [&j](const char* key, double v) {
            if (std::isnan(v)) {
                j[key] = nullptr;
            } else {
                j[key] = v;
            }
        };
        j["k_y"] = row.gains.k_y.value;
        j["k_y_se"] = row.gains.k_y.std_error;
        j["k_x"] = row.gains.k_x.value;
        j["k_x_se"] = row.gains.k_x.std_error;
        j["k_n"] = row.gains.k_n.value;
        j["k_n_se"] = row.gains.k_n.std_error;
        put("snr_x", row.metrics.snr_x);
        put("snr_y", row.metrics.snr_y);
        put("mse", row.metrics.mse);
        put("mse_u", row.metrics.mse_u);
        put("c_snr_x_bits", row.metrics.c_snr_x * kNatsToBits);
        put("c_snr_y_bits", row.metrics.c_snr_y * kNatsToBits);
        put("c_mse_bits", row.metrics.c_mse * kNatsToBits);
        put("c_awgn_bits", row.metrics.c_awgn * kNatsToBits);
        if (row.mi_nats) {
            j["mi_bits"] = *row.mi_nats * kNatsToBits;
        } else {
            j["mi_bits"] = nullptr;
        }
        j["flags"] = row.flags;
        out << j.dump() << "\n";
    }
}

}  // namespace bussgang
