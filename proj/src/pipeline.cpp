#include "geyser/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "geyser/errors.hpp"
#include "geyser/format.hpp"
#include "geyser/time_utils.hpp"

namespace fs = std::filesystem;

namespace geyser {

namespace {

double parse_double_value(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
    return v;
}

int parse_int_value(const std::string& key, const std::string& text) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("config key '" + key + "': expected an integer, got '" + text + "'");
    return v;
}

bool parse_bool_value(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + text + "'");
}

EpochSeconds parse_timestamp_value(const std::string& key, const std::string& text) {
    EpochSeconds t = 0;
    if (parse_epoch_seconds(text, t) || parse_iso8601(text, t)) return t;
    throw ConfigError("config key '" + key + "': expected epoch seconds or ISO-8601, got '" +
                      text + "'");
}

} // namespace

void RunConfig::apply_kv(const KvFile& kv) {
    for (const auto& [key, value] : kv.entries()) {
        if (key == "min_start") {
            filter.min_start = parse_timestamp_value(key, value);
        } else if (key == "interval_min_minutes") {
            filter.interval_min_minutes = parse_double_value(key, value);
        } else if (key == "interval_max_minutes") {
            filter.interval_max_minutes = parse_double_value(key, value);
        } else if (key == "drop_hour_precision") {
            filter.drop_hour_precision = parse_bool_value(key, value);
        } else if (key == "max_lag_min") {
            max_lag_min = parse_double_value(key, value);
        } else if (key == "nps_offset_min") {
            nps_offset_min = parse_double_value(key, value);
        } else if (key == "grid_lo") {
            grid.lo_min = parse_double_value(key, value);
        } else if (key == "grid_hi") {
            grid.hi_min = parse_double_value(key, value);
        } else if (key == "grid_step") {
            grid.step_min = parse_double_value(key, value);
        } else if (key == "window") {
            grid.half_window_min = parse_double_value(key, value);
        } else if (key == "window_mode") {
            if (value == "symmetric") {
                grid.window_mode = WindowMode::symmetric;
            } else if (value == "forward") {
                grid.window_mode = WindowMode::forward;
            } else {
                throw ConfigError("config key 'window_mode': expected symmetric or forward");
            }
        } else if (key == "max_iterations") {
            fit.max_iterations = parse_int_value(key, value);
        } else if (key == "multistart_count") {
            fit.multistart_count = parse_int_value(key, value);
        } else if (key == "relative_sse_tolerance") {
            fit.relative_sse_tolerance = parse_double_value(key, value);
        } else if (key == "parameter_tolerance") {
            fit.parameter_tolerance = parse_double_value(key, value);
        } else if (key == "holdout") {
            holdout_eval_fraction = parse_double_value(key, value);
        } else if (key == "external_name") {
            external_name = value;
        } else if (key == "external_join_window_min") {
            external_join_window_min = parse_double_value(key, value);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw GeyserError("cannot open output file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw GeyserError("short write to output file: " + path);
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string manifest_text(const std::string& dir, std::vector<std::string> file_names) {
    std::sort(file_names.begin(), file_names.end());
    std::string out;
    char hex[32];
    for (const auto& name : file_names) {
        const std::string content = read_file((fs::path(dir) / name).string());
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(fnv1a(content)));
        out += hex;
        out += "  ";
        out += std::to_string(content.size());
        out += "  ";
        out += name;
        out.push_back('\n');
    }
    return out;
}

void write_manifest(const std::string& dir, const std::vector<std::string>& file_names) {
    write_file((fs::path(dir) / "manifest.txt").string(), manifest_text(dir, file_names));
}

namespace {

ParseResult load_series(const std::string& csv_path, const ColumnMapping& mapping) {
    ParseResult parsed = parse_records(read_file(csv_path), mapping);
    apply_inferred_precision(parsed.records);
    return parsed;
}

void append_row_errors(std::string& out, const std::vector<RowError>& errors) {
    for (const auto& err : errors)
        out += "row " + std::to_string(err.row) + ": " + err.reason + "\n";
}

std::vector<PredictionOutcome> anchored_outcomes(const RegressionModel& model,
                                                 const std::vector<IntervalPair>& pairs,
                                                 const std::vector<EruptionRecord>& records) {
    std::vector<PredictionOutcome> outcomes;
    outcomes.reserve(pairs.size());
    const std::string id(to_string(model.kind));
    for (const auto& pair : pairs) {
        const double anchor_end = *records[pair.i].resolved_end();
        const double predicted = anchor_end + predict(model, pair.x_duration_min) * 60.0;
        const double actual = static_cast<double>(records[pair.i + 1].start);
        outcomes.push_back(make_outcome(predicted, actual, id));
    }
    return outcomes;
}

// Count-wise multiset intersection over actual timestamps, so that sets
// with holes (an external feed missing eruptions, duplicate joins) can
// still be compared validly. Returns outcomes dropped per predictor.
std::vector<std::size_t> restrict_to_common_actuals(std::vector<OutcomeSet>& sets) {
    std::map<double, std::size_t> common;
    for (std::size_t s = 0; s < sets.size(); ++s) {
        std::map<double, std::size_t> counts;
        for (const auto& o : sets[s].second) ++counts[o.actual_s];
        if (s == 0) {
            common = std::move(counts);
            continue;
        }
        for (auto& [actual, count] : common) {
            const auto it = counts.find(actual);
            count = it == counts.end() ? 0 : std::min(count, it->second);
        }
    }
    std::vector<std::size_t> dropped(sets.size(), 0);
    for (std::size_t s = 0; s < sets.size(); ++s) {
        std::map<double, std::size_t> taken;
        std::vector<PredictionOutcome> kept;
        kept.reserve(sets[s].second.size());
        for (auto& o : sets[s].second) {
            const auto it = common.find(o.actual_s);
            if (it != common.end() && taken[o.actual_s] < it->second) {
                ++taken[o.actual_s];
                kept.push_back(std::move(o));
            } else {
                ++dropped[s];
            }
        }
        sets[s].second = std::move(kept);
    }
    return dropped;
}

void ensure_out_dir(const std::string& out_dir) {
    if (out_dir.empty()) throw ConfigError("output directory not set");
    fs::create_directories(out_dir);
}

} // namespace

RunOutputs run_oldfaithful(const RunConfig& cfg) {
    cfg.fit.validate();
    ensure_out_dir(cfg.out_dir);
    const ColumnMapping mapping = ColumnMapping::load(cfg.mapping_path);
    const ParseResult parsed = load_series(cfg.input_path, mapping);

    FilterResult filtered = filter_series(parsed.records, cfg.filter);
    const std::vector<IntervalPair> pairs = build_interval_pairs(filtered.records, cfg.filter);
    if (pairs.size() < 5)
        throw EmptyResult("only " + std::to_string(pairs.size()) +
                          " interval pairs survive; need at least 5 to fit");

    // chronological split: fit on the head, score on the tail
    std::vector<IntervalPair> train = pairs;
    std::vector<IntervalPair> held = pairs;
    if (cfg.holdout_eval_fraction > 0.0) {
        if (cfg.holdout_eval_fraction >= 1.0)
            throw ConfigError("holdout fraction must lie in [0, 1)");
        const auto held_n = static_cast<std::size_t>(
            std::llround(cfg.holdout_eval_fraction * static_cast<double>(pairs.size())));
        if (held_n == 0 || pairs.size() - held_n < 5)
            throw ConfigError("holdout split leaves too few pairs to fit and score");
        train.assign(pairs.begin(), pairs.end() - static_cast<std::ptrdiff_t>(held_n));
        held.assign(pairs.end() - static_cast<std::ptrdiff_t>(held_n), pairs.end());
    }

    const std::vector<RegressionModel> models = {fit_linear(train),
                                                 fit_sigmoid(train, cfg.fit),
                                                 fit_exponential(train, cfg.fit)};

    std::vector<OutcomeSet> sets;
    for (const auto& model : models)
        sets.emplace_back(std::string(to_string(model.kind)),
                          anchored_outcomes(model, held, filtered.records));

    std::size_t external_unmatched = 0;
    std::vector<std::size_t> dropped;
    if (!cfg.external_predictions_path.empty()) {
        const auto predictions = parse_external_predictions(
            read_file(cfg.external_predictions_path), mapping.timestamp_format);
        ExternalEvalResult external = evaluate_external(
            predictions, filtered.records, cfg.external_name, cfg.external_join_window_min);
        external_unmatched = external.unmatched;
        sets.emplace_back("external:" + cfg.external_name, std::move(external.outcomes));
        dropped = restrict_to_common_actuals(sets);
        for (const auto& set : sets)
            if (set.second.empty())
                throw EmptyResult("no eruptions are covered by every predictor; cannot compare");
    }

    const AccuracyTable table = accuracy_table(sets);

    std::string report = filter_report_block(filtered.report, parsed.errors.size());
    report += "interval_pairs=" + std::to_string(pairs.size()) + "\n";
    report += "train_pairs=" + std::to_string(train.size()) + "\n";
    report += "held_pairs=" + std::to_string(held.size()) + "\n";
    if (!cfg.external_predictions_path.empty()) {
        report += "external_unmatched=" + std::to_string(external_unmatched) + "\n";
        for (std::size_t s = 0; s < sets.size(); ++s)
            report += "restricted_" + sets[s].first + "=" + std::to_string(dropped[s]) + "\n";
    }
    append_row_errors(report, parsed.errors);

    const fs::path dir(cfg.out_dir);
    RunOutputs outputs;
    outputs.files = {"filter_report.txt", "model_params.txt", "accuracy_table.csv",
                     "accuracy_table.md", "scatter.csv"};
    write_file((dir / "filter_report.txt").string(), report);
    write_file((dir / "model_params.txt").string(), model_param_block(models));
    write_file((dir / "accuracy_table.csv").string(),
               accuracy_table_csv(table, TableStyle::percent_sig3));
    write_file((dir / "accuracy_table.md").string(),
               accuracy_table_markdown(table, TableStyle::percent_sig3));
    write_file((dir / "scatter.csv").string(), interval_pairs_csv(pairs));
    write_manifest(cfg.out_dir, outputs.files);
    return outputs;
}

RunOutputs run_beehive(const RunConfig& cfg) {
    cfg.grid.validate();
    ensure_out_dir(cfg.out_dir);
    if (cfg.indicator_input_path.empty())
        throw ConfigError("beehive runs need --indicator-input");
    const ColumnMapping mapping = ColumnMapping::load(cfg.mapping_path);
    const ParseResult indicator = load_series(cfg.indicator_input_path, mapping);
    const ParseResult main_series = load_series(cfg.input_path, mapping);

    const PairingResult pairing =
        pair_indicator_main(indicator.records, main_series.records, cfg.max_lag_min);
    if (pairing.pairings.empty())
        throw EmptyResult("no indicator/main pairings within " +
                          format_sig(cfg.max_lag_min, 6) + " minutes");

    const OffsetStats stats = offset_stats(pairing.pairings);
    const auto [slope, intercept] = trend_slope(pairing.pairings);
    const GridSearchResult grid = optimal_offset(pairing.pairings, cfg.grid);

    const std::vector<std::pair<std::string, double>> constants = {
        {"mean", stats.mean_min},
        {"median", stats.median_min},
        {"mode", stats.mode_min},
        {"optimal", grid.best_offset_min},
        {"NPS", cfg.nps_offset_min},
    };
    std::vector<OutcomeSet> sets;
    for (const auto& [id, c] : constants) {
        std::vector<PredictionOutcome> outcomes;
        outcomes.reserve(pairing.pairings.size());
        for (const auto& p : pairing.pairings)
            outcomes.push_back(make_outcome(offset_predict(p.indicator_start, c),
                                            static_cast<double>(p.main_start), id));
        sets.emplace_back(id, std::move(outcomes));
    }
    const AccuracyTable table = accuracy_table(sets);

    std::string report;
    report += "indicator_records=" + std::to_string(indicator.records.size()) + "\n";
    report += "main_records=" + std::to_string(main_series.records.size()) + "\n";
    report += "pairings=" + std::to_string(pairing.pairings.size()) + "\n";
    report += "unmatched_main=" + std::to_string(pairing.unmatched_main) + "\n";
    report += "mean_min=" + format_sig(stats.mean_min, 12) + "\n";
    report += "median_min=" + format_sig(stats.median_min, 12) + "\n";
    report += "mode_min=" + format_sig(stats.mode_min, 12) + "\n";
    report += "trend_slope_min_per_eruption=" + format_sig(slope, 12) + "\n";
    report += "trend_intercept_min=" + format_sig(intercept, 12) + "\n";
    report += "optimal_offset_min=" + format_sig(grid.best_offset_min, 12) + "\n";
    report += "optimal_accuracy=" + format_sig(grid.best_accuracy, 12) + "\n";
    report += "nps_offset_min=" + format_sig(cfg.nps_offset_min, 12) + "\n";
    append_row_errors(report, indicator.errors);
    append_row_errors(report, main_series.errors);

    const fs::path dir(cfg.out_dir);
    RunOutputs outputs;
    outputs.files = {"offset_report.txt", "accuracy_table.csv", "accuracy_table.md", "trend.csv",
                     "grid_curve.csv"};
    write_file((dir / "offset_report.txt").string(), report);
    write_file((dir / "accuracy_table.csv").string(),
               accuracy_table_csv(table, TableStyle::fraction_dec3));
    write_file((dir / "accuracy_table.md").string(),
               accuracy_table_markdown(table, TableStyle::fraction_dec3));
    write_file((dir / "trend.csv").string(), trend_csv(pairing.pairings, slope, intercept));
    write_file((dir / "grid_curve.csv").string(), grid_curve_csv(grid));
    write_manifest(cfg.out_dir, outputs.files);
    return outputs;
}

RunOutputs run_report(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
    if (run_dirs.empty()) throw ConfigError("report: no run directories given");
    ensure_out_dir(out_dir);

    std::string doc = "# Geyser prediction report\n";
    for (const auto& dir : run_dirs) {
        const std::string manifest = read_file((fs::path(dir) / "manifest.txt").string());
        doc += "\n## " + fs::path(dir).filename().string() + "\n";
        std::istringstream lines(manifest);
        std::string line;
        while (std::getline(lines, line)) {
            const auto name_pos = line.rfind("  ");
            if (name_pos == std::string::npos) continue;
            const std::string name = line.substr(name_pos + 2);
            const std::string content = read_file((fs::path(dir) / name).string());
            if (name.size() > 3 && name.ends_with(".md")) {
                doc += "\n### " + name + "\n\n" + content;
            } else if (name.ends_with(".txt")) {
                doc += "\n### " + name + "\n\n```\n" + content + "```\n";
            } else {
                doc += "\n### " + name + "\n\n(see " + (fs::path(dir) / name).string() + ")\n";
            }
        }
    }

    write_file((fs::path(out_dir) / "report.md").string(), doc);
    RunOutputs outputs;
    outputs.files = {"report.md"};
    write_manifest(out_dir, outputs.files);
    return outputs;
}

} // namespace geyser
