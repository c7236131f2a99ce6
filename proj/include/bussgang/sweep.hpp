#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bussgang/config.hpp"
#include "bussgang/metrics.hpp"

namespace bussgang {

/// One CSV/JSON row: empirical gains plus the derived metric set for a single
/// (sweep value, nonlinearity) pair.
struct ResultRow {
    double sweep_value = 0.0;
    std::string g_label;
    GainSet gains;
    MetricSet metrics;
    std::optional<double> mi_nats;
    std::vector<std::string> flags;
    bool failed = false;
    std::string error;
};

/// Fixed column set; golden-file tested.
extern const char* const kCsvHeader;

/// Runs every grid point for every configured nonlinearity, rows in grid
/// order. Engine failures are recorded on the row and the run continues.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config);

/// CSV with '#' header comments echoing the config; capacities in bits;
/// degenerate values rendered as the literal token NA. Byte-stable for a
/// fixed config and seed.
void write_csv(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
               std::ostream& out);

/// Same content as JSON lines.
void write_json_lines(const ExperimentConfig& config, const std::vector<ResultRow>& rows,
                      std::ostream& out);

/// Per-point seed derived from the experiment seed and the (point, g) index.
std::uint64_t point_seed(std::uint64_t seed, std::size_t point_index, std::size_t g_index);

}  // namespace bussgang
