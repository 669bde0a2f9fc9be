#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geyser/errors.hpp"
#include "geyser/fetch.hpp"
#include "geyser/pipeline.hpp"

namespace {

struct CliFlags {
    std::string input, indicator_input, mapping, config, external_predictions, out_dir;
    double grid_lo = 0, grid_hi = 0, grid_step = 0, window = 0, holdout = 0, max_lag = 0;
};

// precedence: CLI flag > config file > built-in default
geyser::RunConfig assemble_config(const CLI::App& cmd, const CliFlags& flags) {
    geyser::RunConfig cfg;
    if (!flags.config.empty()) cfg.apply_kv(geyser::KvFile::load(flags.config));
    cfg.input_path = flags.input;
    cfg.indicator_input_path = flags.indicator_input;
    cfg.mapping_path = flags.mapping;
    cfg.external_predictions_path = flags.external_predictions;
    cfg.out_dir = flags.out_dir;
    if (cmd.count("--grid-lo")) cfg.grid.lo_min = flags.grid_lo;
    if (cmd.count("--grid-hi")) cfg.grid.hi_min = flags.grid_hi;
    if (cmd.count("--grid-step")) cfg.grid.step_min = flags.grid_step;
    if (cmd.count("--window")) cfg.grid.half_window_min = flags.window;
    if (cmd.count("--holdout")) cfg.holdout_eval_fraction = flags.holdout;
    if (cmd.count("--max-lag")) cfg.max_lag_min = flags.max_lag;
    return cfg;
}

void add_common_flags(CLI::App* cmd, CliFlags& flags, bool beehive) {
    cmd->add_option("--input", flags.input, "Raw eruption-log CSV")->required();
    cmd->add_option("--mapping", flags.mapping, "Column-mapping key=value file")->required();
    cmd->add_option("--config", flags.config, "Run config key=value file");
    cmd->add_option("--out-dir", flags.out_dir, "Output directory")->required();
    cmd->add_option("--holdout", flags.holdout,
                    "Score on this chronological tail fraction instead of in-sample");
    if (beehive) {
        cmd->add_option("--indicator-input", flags.indicator_input, "Indicator series CSV")
            ->required();
        cmd->add_option("--max-lag", flags.max_lag,
                        "Indicator/main pairing window, minutes (default 60)");
        cmd->add_option("--grid-lo", flags.grid_lo, "Grid search lower offset, minutes");
        cmd->add_option("--grid-hi", flags.grid_hi, "Grid search upper offset, minutes");
        cmd->add_option("--grid-step", flags.grid_step, "Grid search step, minutes");
        cmd->add_option("--window", flags.window, "Accuracy half-window, minutes");
    } else {
        cmd->add_option("--external-predictions", flags.external_predictions,
                        "External prediction CSV (columns: geyser,predicted)");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geyser eruption-time prediction pipeline"};
    app.require_subcommand(1);

    // fetch
    std::string fetch_url, fetch_out, fetch_base;
    CLI::App* fetch = app.add_subcommand("fetch", "Download an eruption-log export");
    fetch->add_option("url", fetch_url, "Absolute URL, or a path appended to --base-url")
        ->required();
    fetch->add_option("--out", fetch_out, "File to write the response body to")->required();
    fetch->add_option("--base-url", fetch_base,
                      "Base URL for relative paths (falls back to $GEYSERTIMES_BASE_URL)");

    CliFlags of_flags;
    CLI::App* oldfaithful =
        app.add_subcommand("oldfaithful", "Duration -> interval regression pipeline");
    add_common_flags(oldfaithful, of_flags, /*beehive=*/false);

    CliFlags bh_flags;
    CLI::App* beehive =
        app.add_subcommand("beehive", "Indicator-offset prediction pipeline");
    add_common_flags(beehive, bh_flags, /*beehive=*/true);

    std::vector<std::string> report_dirs;
    std::string report_out;
    CLI::App* report = app.add_subcommand("report", "Merge prior run outputs into one document");
    report->add_option("run_dirs", report_dirs, "Run directories to merge")->required();
    report->add_option("--out-dir", report_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (fetch->parsed()) {
            std::string url = fetch_url;
            if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0) {
                std::string base = fetch_base;
                if (base.empty())
                    if (const char* env = std::getenv("GEYSERTIMES_BASE_URL")) base = env;
                if (base.empty())
                    throw geyser::ConfigError(
                        "relative fetch path needs --base-url or $GEYSERTIMES_BASE_URL");
                if (!base.empty() && base.back() == '/') base.pop_back();
                if (!url.empty() && url.front() != '/') url.insert(url.begin(), '/');
                url = base + url;
            }
            geyser::fetch_to_file(url, fetch_out);
            std::cout << "saved " << fetch_out << "\n";
        } else if (oldfaithful->parsed()) {
            const auto cfg = assemble_config(*oldfaithful, of_flags);
            const auto outputs = geyser::run_oldfaithful(cfg);
            for (const auto& f : outputs.files) std::cout << cfg.out_dir << "/" << f << "\n";
        } else if (beehive->parsed()) {
            const auto cfg = assemble_config(*beehive, bh_flags);
            const auto outputs = geyser::run_beehive(cfg);
            for (const auto& f : outputs.files) std::cout << cfg.out_dir << "/" << f << "\n";
        } else if (report->parsed()) {
            geyser::run_report(report_dirs, report_out);
            std::cout << report_out << "/report.md\n";
        }
    } catch (const geyser::GeyserError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
