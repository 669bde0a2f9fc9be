#include "geyser/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "geyser/csv.hpp"
#include "geyser/errors.hpp"
#include "geyser/kvfile.hpp"

namespace geyser {

PredictionOutcome make_outcome(double predicted_s, double actual_s, std::string predictor_id) {
    PredictionOutcome out;
    out.predicted_s = predicted_s;
    out.actual_s = actual_s;
    out.abs_error_min = std::abs(actual_s - predicted_s) / 60.0;
    out.predictor_id = std::move(predictor_id);
    return out;
}

double windowed_accuracy(const std::vector<PredictionOutcome>& outcomes, double z_min) {
    if (outcomes.empty()) throw EmptyInput("windowed_accuracy: no outcomes");
    if (!(z_min > 0.0)) throw PreconditionError("windowed_accuracy: z must be positive");
    std::size_t within = 0;
    for (const auto& o : outcomes)
        if (o.abs_error_min <= z_min) ++within;
    return static_cast<double>(within) / static_cast<double>(outcomes.size());
}

std::vector<double> default_z_values() {
    std::vector<double> z(15);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = static_cast<double>(i + 1);
    return z;
}

namespace {

std::vector<double> sorted_actuals(const std::vector<PredictionOutcome>& outcomes) {
    std::vector<double> a;
    a.reserve(outcomes.size());
    for (const auto& o : outcomes) a.push_back(o.actual_s);
    std::sort(a.begin(), a.end());
    return a;
}

} // namespace

AccuracyTable accuracy_table(const std::vector<OutcomeSet>& outcome_sets,
                             std::vector<double> z_values) {
    if (outcome_sets.empty()) throw EmptyInput("accuracy_table: no outcome sets");
    for (const auto& [id, outcomes] : outcome_sets)
        if (outcomes.empty())
            throw EmptyInput("accuracy_table: predictor '" + id + "' has no outcomes");

    const auto reference = sorted_actuals(outcome_sets.front().second);
    for (const auto& [id, outcomes] : outcome_sets)
        if (sorted_actuals(outcomes) != reference)
            throw MismatchedActuals("accuracy_table: predictor '" + id +
                                    "' covers a different actual-eruption set than '" +
                                    outcome_sets.front().first + "'");

    AccuracyTable table;
    table.z_values = std::move(z_values);
    for (const auto& [id, outcomes] : outcome_sets) table.predictor_ids.push_back(id);
    table.cells.reserve(table.z_values.size());
    for (const double z : table.z_values) {
        std::vector<double> row;
        row.reserve(outcome_sets.size());
        for (const auto& [id, outcomes] : outcome_sets)
            row.push_back(windowed_accuracy(outcomes, z));
        table.cells.push_back(std::move(row));
    }
    return table;
}

std::vector<PredictionOutcome> evaluate_regression(const RegressionModel& model,
                                                   const std::vector<IntervalPair>& held_pairs) {
    if (held_pairs.empty()) throw PreconditionError("evaluate_regression: no held pairs");
    std::vector<PredictionOutcome> outcomes;
    outcomes.reserve(held_pairs.size());
    const std::string id(to_string(model.kind));
    for (const auto& pair : held_pairs) {
        const double predicted_min = predict(model, pair.x_duration_min);
        outcomes.push_back(make_outcome(predicted_min * 60.0, pair.y_gap_min * 60.0, id));
    }
    return outcomes;
}

ExternalEvalResult evaluate_external(const std::vector<ExternalPrediction>& predictions,
                                     const std::vector<EruptionRecord>& actuals,
                                     const std::string& name, double join_window_min) {
    if (!(join_window_min > 0.0))
        throw PreconditionError("evaluate_external: join window must be positive");

    std::vector<EpochSeconds> starts;
    starts.reserve(actuals.size());
    for (const auto& rec : actuals) starts.push_back(rec.start);
    std::sort(starts.begin(), starts.end());

    const std::string id = "external:" + name;
    ExternalEvalResult result;
    for (const auto& pred : predictions) {
        // nearest actual start; earlier one wins exact ties
        const auto it = std::lower_bound(starts.begin(), starts.end(), pred.predicted);
        double best_gap_s = -1.0;
        EpochSeconds best_start = 0;
        if (it != starts.begin()) {
            best_start = *(it - 1);
            best_gap_s = static_cast<double>(pred.predicted - best_start);
        }
        if (it != starts.end()) {
            const double gap = static_cast<double>(*it - pred.predicted);
            if (best_gap_s < 0.0 || gap < best_gap_s) {
                best_start = *it;
                best_gap_s = gap;
            }
        }
        if (best_gap_s < 0.0 || best_gap_s > join_window_min * 60.0) {
            ++result.unmatched;
            continue;
        }
        result.outcomes.push_back(make_outcome(static_cast<double>(pred.predicted),
                                               static_cast<double>(best_start), id));
    }
    if (result.outcomes.empty())
        throw NoMatches("evaluate_external: no prediction resolved to an actual eruption");
    return result;
}

std::vector<ExternalPrediction> parse_external_predictions(std::string_view csv_text,
                                                           TimestampFormat format) {
    const CsvTable table = parse_csv(csv_text);
    const auto find_col = [&](std::string_view wanted) {
        const auto it = std::find(table.header.begin(), table.header.end(), wanted);
        if (it == table.header.end())
            throw MissingColumn("external predictions: column '" + std::string(wanted) +
                                "' not found");
        return static_cast<std::size_t>(it - table.header.begin());
    };
    const std::size_t geyser_col = find_col("geyser");
    const std::size_t predicted_col = find_col("predicted");

    std::vector<ExternalPrediction> predictions;
    predictions.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size())
            throw CsvError("external predictions row " + std::to_string(r + 2) +
                           ": wrong field count");
        ExternalPrediction pred;
        pred.geyser_id = std::string(trim(row[geyser_col]));
        const std::string_view text = trim(row[predicted_col]);
        const bool ok = format == TimestampFormat::epoch_seconds
                            ? parse_epoch_seconds(text, pred.predicted)
                            : parse_iso8601(text, pred.predicted);
        if (!ok)
            throw CsvError("external predictions row " + std::to_string(r + 2) +
                           ": unparseable timestamp '" + std::string(text) + "'");
        predictions.push_back(std::move(pred));
    }
    return predictions;
}

bool meets_target(const std::vector<PredictionOutcome>& outcomes) {
    return windowed_accuracy(outcomes, 10.0) >= 0.90;
}

} // namespace geyser
