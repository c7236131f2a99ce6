#include "bussgang/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bussgang/plot.hpp"
#include "bussgang/sweep.hpp"
#include "bussgang/verify_suite.hpp"

namespace bussgang {

namespace {

namespace fs = std::filesystem;

fs::path default_out_dir() {
    if (const char* env = std::getenv("BUSSGANG_OUT_DIR")) {
        return fs::path(env);
    }
    return fs::path(".");
}

fs::path preset_dir() {
    if (const char* env = std::getenv("BUSSGANG_PRESET_DIR")) {
        return fs::path(env);
    }
    return fs::path("presets");
}

int do_sweep(const std::string& config_path, std::string out_path, const std::string& format,
             std::optional<std::uint64_t> seed, std::optional<std::int64_t> samples,
             bool serial, const std::string& plot_kind) {
    ExperimentConfig config = load_experiment(config_path);
    if (seed) {
        config.engine.seed = *seed;
    }
    if (samples) {
        config.engine.samples = *samples;
    }
    if (serial) {
        config.engine.serial = true;
    }

    if (out_path.empty()) {
        const char* ext = format == "json" ? ".jsonl" : ".csv";
        out_path = (default_out_dir() / (config.name + ext)).string();
    }
    const std::vector<ResultRow> rows = run_sweep(config);
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 2;
    }
    if (format == "json") {
        write_json_lines(config, rows, out);
    } else {
        write_csv(config, rows, out);
    }
    out.close();
    std::cout << "wrote " << out_path << "\n";

    if (!plot_kind.empty()) {
        if (format == "json") {
            std::cerr << "plotting needs csv output\n";
            return 2;
        }
        const std::string svg = fs::path(out_path).replace_extension(".svg").string();
        emit_plot(out_path, plot_kind, svg);
        std::cout << "wrote " << svg << "\n";
    }
    for (const ResultRow& row : rows) {
        if (row.failed) {
            std::cerr << "row " << row.sweep_value << "/" << row.g_label
                      << " failed: " << row.error << "\n";
        }
    }
    return 0;
}

int do_preset_list() {
    const fs::path dir = preset_dir();
    if (!fs::exists(dir)) {
        std::cerr << "preset directory not found: " << dir.string() << "\n";
        return 2;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        try {
            const ExperimentConfig config = load_experiment(file.string());
            std::cout << config.name << "\t" << file.string() << "\t" << config.description
                      << "\n";
        } catch (const std::exception& e) {
            std::cout << file.stem().string() << "\t" << file.string() << "\t(unreadable: "
                      << e.what() << ")\n";
        }
    }
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"linear-regression analysis of nonlinear transformations of "
                 "Gaussian and Gaussian-mixture inputs"};
    app.require_subcommand(1);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment config, write CSV/JSON");
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::string plot_kind;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::int64_t> samples_override;
    bool serial = false;
    sweep_cmd->add_option("--config", config_path, "experiment config file")->required();
    sweep_cmd->add_option("--out", out_path, "output path (default: $BUSSGANG_OUT_DIR/<name>.csv)");
    sweep_cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--seed", seed_override, "override engine seed");
    sweep_cmd->add_option("--samples", samples_override, "override Monte Carlo sample count");
    sweep_cmd->add_flag("--serial", serial, "force the serial reference kernels");
    sweep_cmd->add_option("--plot", plot_kind, "also render an SVG (gains or capacity)")
        ->check(CLI::IsMember({"gains", "capacity"}));

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the numerical theorem checkers");
    std::vector<std::string> check_names;
    bool verify_all = false;
    bool verify_list = false;
    std::uint64_t verify_seed = 7;
    std::int64_t verify_samples = 1'000'000;
    bool verify_serial = false;
    std::string verify_out;
    verify_cmd->add_option("checks", check_names, "check names (see --list)");
    verify_cmd->add_flag("--all", verify_all, "run every check");
    verify_cmd->add_flag("--list", verify_list, "list check names and expected verdicts");
    verify_cmd->add_option("--seed", verify_seed, "RNG seed");
    verify_cmd->add_option("--samples", verify_samples, "Monte Carlo samples per check");
    verify_cmd->add_flag("--serial", verify_serial, "force the serial reference kernels");
    verify_cmd->add_option("--out", verify_out, "write the JSON-lines report here instead of stdout");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "render a sweep CSV as SVG");
    std::string plot_csv;
    std::string plot_out;
    std::string plot_kind_arg = "gains";
    plot_cmd->add_option("--csv", plot_csv, "input CSV")->required();
    plot_cmd->add_option("--kind", plot_kind_arg, "gains or capacity")
        ->check(CLI::IsMember({"gains", "capacity"}));
    plot_cmd->add_option("--out", plot_out, "output SVG path")->required();

    // preset
    auto* preset_cmd = app.add_subcommand("preset", "preset utilities");
    auto* preset_list_cmd = preset_cmd->add_subcommand("list", "list shipped experiment presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sweep_cmd->parsed()) {
            return do_sweep(config_path, out_path, format, seed_override, samples_override,
                            serial, plot_kind);
        }
        if (verify_cmd->parsed()) {
            if (verify_list) {
                for (const SuiteCheck& check : verify_suite()) {
                    std::cout << check.name << "\t"
                              << (check.expected_pass ? "expect_pass" : "expect_failure")
                              << "\n";
                }
                return 0;
            }
            if (!verify_all && check_names.empty()) {
                std::cerr << "verify: give check names or --all (see --list)\n";
                return 2;
            }
            const std::vector<std::string> selected = verify_all
                                                          ? std::vector<std::string>{}
                                                          : check_names;
            const Exec exec = verify_serial ? Exec::serial : Exec::parallel;
            if (!verify_out.empty()) {
                std::ofstream out(verify_out);
                if (!out) {
                    std::cerr << "cannot write " << verify_out << "\n";
                    return 2;
                }
                return run_verify_suite(selected, verify_seed, verify_samples, exec, out);
            }
            return run_verify_suite(selected, verify_seed, verify_samples, exec, std::cout);
        }
        if (plot_cmd->parsed()) {
            emit_plot(plot_csv, plot_kind_arg, plot_out);
            std::cout << "wrote " << plot_out << "\n";
            return 0;
        }
        if (preset_cmd->parsed()) {
            if (preset_list_cmd->parsed()) {
                return do_preset_list();
            }
            std::cerr << "preset: unknown action (try 'preset list')\n";
            return 2;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace bussgang
