#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geyser/evaluate.hpp"
#include "geyser/kvfile.hpp"
#include "geyser/offset.hpp"
#include "geyser/prep.hpp"
#include "geyser/regress.hpp"

namespace geyser {

/// Everything one reproducible run needs. Precedence: CLI flag > config
/// file > these defaults.
struct RunConfig {
    std::string input_path;             // raw eruption CSV (main series)
    std::string indicator_input_path;   // indicator series (beehive runs)
    std::string mapping_path;
    std::string external_predictions_path;
    std::string out_dir;

    FilterConfig filter;
    FitOptions fit;
    GridSearchOptions grid;
    double max_lag_min = 60.0;
    double nps_offset_min = 17.0;           // published indicator + 17 baseline
    double holdout_eval_fraction = 0.0;     // 0 = score in-sample
    std::string external_name = "NPS";
    double external_join_window_min = 120.0;

    /// Overlay recognized keys from a key=value config file.
    void apply_kv(const KvFile& kv);  // throws ConfigError on unknown keys
};

struct RunOutputs {
    std::vector<std::string> files;  // declared outputs, manifest excluded
};

/// Ingest -> filter -> interval pairs -> three fits -> accuracy table.
/// Writes filter_report.txt, model_params.txt, accuracy_table.csv,
/// accuracy_table.md, scatter.csv and manifest.txt into cfg.out_dir.
RunOutputs run_oldfaithful(const RunConfig& cfg);

/// Indicator/main pairing -> offset stats -> five constant-offset
/// predictors -> accuracy table. Writes offset_report.txt,
/// accuracy_table.csv, accuracy_table.md, trend.csv, grid_curve.csv and
/// manifest.txt into cfg.out_dir.
RunOutputs run_beehive(const RunConfig& cfg);

/// Merge prior run directories (each with a manifest) into one markdown
/// document: <out_dir>/report.md plus its manifest.
RunOutputs run_report(const std::vector<std::string>& run_dirs, const std::string& out_dir);

// file helpers shared by the CLI and tests
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::uint64_t fnv1a(std::string_view bytes);
/// "<fnv1a hex>  <byte count>  <file name>" per output, sorted by name.
std::string manifest_text(const std::string& dir, std::vector<std::string> file_names);
void write_manifest(const std::string& dir, const std::vector<std::string>& file_names);

} // namespace geyser
