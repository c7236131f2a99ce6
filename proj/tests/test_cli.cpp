#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bussgang/plot.hpp"
#include "bussgang/sweep.hpp"

using namespace bussgang;
using Catch::Approx;

namespace {

Json tiny_config() {
    return Json::parse(R"({
        "name": "tiny",
        "description": "three-point gaussian sweep",
        "scenario": {
            "source": {"kind": "gaussian"},
            "noise": {"kind": "gaussian"},
            "correlation": 0.0,
            "g": [{"kind": "soft_limiter", "y_th": 1.0}, {"kind": "scale", "a": 0.0}]
        },
        "sweep": {"variable": "rho_p", "grid": [0.25, 0.5, 0.75], "total_power": 10.0},
        "engine": {"samples": 20000, "batches": 20, "seed": 3}
    })");
}

std::string render_csv(const ExperimentConfig& config, const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    write_csv(config, rows, out);
    return out.str();
}

}  // namespace

TEST_CASE("experiment config parsing", "[cli]") {
    SECTION("valid document round-trips the scenario") {
        const ExperimentConfig config = parse_experiment(tiny_config());
        CHECK(config.name == "tiny");
        CHECK(config.nonlinearities.size() == 2);
        CHECK(config.sweep.grid.size() == 3);
        CHECK(config.engine.samples == 20000);
    }

    SECTION("field errors carry the field name") {
        Json bad = tiny_config();
        bad["sweep"]["grid"] = Json::array({0.5, 0.25});
        CHECK_THROWS_WITH(parse_experiment(bad),
                          Catch::Matchers::ContainsSubstring("sweep.grid"));

        Json missing = tiny_config();
        missing.erase("name");
        CHECK_THROWS_AS(parse_experiment(missing), ConfigError);

        Json bad_kind = tiny_config();
        bad_kind["scenario"]["source"]["kind"] = "cauchy";
        CHECK_THROWS_AS(parse_experiment(bad_kind), ConfigError);
    }

    SECTION("distribution fragments round-trip") {
        DistributionConfig d;
        d.kind = "class_a";
        d.class_a_index = 0.01;
        d.class_a_gamma = 0.01;
        d.variance = 1.0;
        const Json j = distribution_to_json(d);
        CHECK(j["kind"] == "class_a");
        CHECK(j["A"] == 0.01);
        const DistributionConfig back = distribution_from_json(j);
        CHECK(back.class_a_index == 0.01);
        CHECK(back.variance.value() == 1.0);
    }

    SECTION("blanker threshold accepts the optimal marker") {
        const Json j = Json::parse(R"({"kind": "blanker", "y_th": "mmse_optimal"})");
        const NonlinearityConfig g = nonlinearity_from_json(j);
        CHECK(g.optimal_threshold);
        CHECK(nonlinearity_to_json(g)["y_th"] == "mmse_optimal");
    }
}

TEST_CASE("point resolution solves the correlated power split", "[cli]") {
    ExperimentConfig config = parse_experiment(tiny_config());
    config.correlation = 0.3;
    const ResolvedPoint point = resolve_point(config, 0.5, config.nonlinearities[0]);
    CHECK(point.scenario.total_power() == Approx(10.0).epsilon(1e-12));
    CHECK(point.scenario.source_power() ==
          Approx(point.scenario.noise_power()).epsilon(1e-12));

    // snr_db sweeps fix the noise power at one.
    ExperimentConfig snr = parse_experiment(tiny_config());
    snr.sweep.variable = "snr_db";
    const ResolvedPoint p2 = resolve_point(snr, 10.0, snr.nonlinearities[0]);
    CHECK(p2.scenario.noise_power() == Approx(1.0));
    CHECK(p2.scenario.source_power() == Approx(10.0));
}

TEST_CASE("sweep output schema and determinism", "[cli]") {
    const ExperimentConfig config = parse_experiment(tiny_config());
    const std::vector<ResultRow> rows = run_sweep(config);
    REQUIRE(rows.size() == 6);  // 3 grid points x 2 nonlinearities

    const std::string csv = render_csv(config, rows);

    SECTION("golden header and fixed column order") {
        CHECK(csv.find("# bussgang sweep: tiny\n") == 0);
        CHECK(csv.find("# config: {\"name\":\"tiny\"") != std::string::npos);
        CHECK(csv.find("sweep_variable,sweep_value,g,k_y,k_y_se,k_x,k_x_se,k_n,k_n_se,"
                       "snr_x,snr_y,mse,mse_u,c_snr_x,c_snr_y,c_mse,c_awgn,mi,flags\n") !=
              std::string::npos);
        // Every data line has the full column count.
        std::istringstream lines(csv);
        std::string line;
        int data_lines = 0;
        while (std::getline(lines, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("sweep_variable", 0) == 0) {
                continue;
            }
            CHECK(std::count(line.begin(), line.end(), ',') == 18);
            ++data_lines;
        }
        CHECK(data_lines == 6);
    }

    SECTION("degenerate scale-zero rows render NA tokens") {
        bool saw_na = false;
        std::istringstream lines(csv);
        std::string line;
        while (std::getline(lines, line)) {
            if (line.find(",scale,") != std::string::npos) {
                CHECK(line.find(",NA,") != std::string::npos);
                saw_na = true;
            }
        }
        CHECK(saw_na);
    }

    SECTION("byte-identical rerun") {
        const std::vector<ResultRow> again = run_sweep(config);
        CHECK(render_csv(config, again) == csv);
    }

    SECTION("json lines mirror the rows") {
        std::ostringstream out;
        write_json_lines(config, rows, out);
        std::istringstream lines(out.str());
        std::string line;
        int count = 0;
        while (std::getline(lines, line)) {
            const Json j = Json::parse(line);
            CHECK(j.contains("k_y"));
            ++count;
        }
        CHECK(count == 6);
    }
}

TEST_CASE("equal-gain scenarios keep the three columns together", "[cli]") {
    // The flat-gains shape of the all-Gaussian sweep: k_y = k_x = k_n at
    // every point, matching the erf value.
    const ExperimentConfig config = parse_experiment(tiny_config());
    const std::vector<ResultRow> rows = run_sweep(config);
    for (const ResultRow& row : rows) {
        if (row.g_label != "soft_limiter") {
            continue;
        }
        REQUIRE_FALSE(row.failed);
        const double expected = std::erf(1.0 / std::sqrt(20.0));
        CHECK(row.gains.k_y.value == Approx(expected).margin(5.0 * row.gains.k_y.std_error));
        CHECK(std::abs(row.gains.k_x.value - row.gains.k_y.value) <=
              4.0 * (row.gains.k_x.std_error + row.gains.k_y.std_error));
    }
}

TEST_CASE("plot emission", "[cli]") {
    namespace fs = std::filesystem;
    const ExperimentConfig config = parse_experiment(tiny_config());
    const std::vector<ResultRow> rows = run_sweep(config);
    const fs::path dir = fs::temp_directory_path() / "bussgang_plot_test";
    fs::create_directories(dir);
    const fs::path csv_path = dir / "tiny.csv";
    {
        std::ofstream out(csv_path);
        write_csv(config, rows, out);
    }
    const fs::path svg_path = dir / "tiny.svg";
    emit_plot(csv_path.string(), "gains", svg_path.string());
    std::ifstream svg(svg_path);
    std::stringstream content;
    content << svg.rdbuf();
    CHECK(content.str().find("<svg") != std::string::npos);
    CHECK(content.str().find("polyline") != std::string::npos);

    CHECK_THROWS_AS(emit_plot(csv_path.string(), "nonsense", (dir / "x.svg").string()),
                    std::runtime_error);
    fs::remove_all(dir);
}
