#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geyser/ingest.hpp"
#include "geyser/prep.hpp"
#include "geyser/regress.hpp"

namespace geyser {

/// One prediction scored against the observed eruption. Times are seconds
/// (fractional allowed); the error is their gap in minutes.
struct PredictionOutcome {
    double predicted_s = 0.0;
    double actual_s = 0.0;
    double abs_error_min = 0.0;
    std::string predictor_id;
};

PredictionOutcome make_outcome(double predicted_s, double actual_s, std::string predictor_id);

/// Fraction of outcomes with |error| <= z_min, boundary inclusive.
double windowed_accuracy(const std::vector<PredictionOutcome>& outcomes, double z_min);

/// Half-window sweep 1..15 minutes (Table layout).
std::vector<double> default_z_values();

/// One accuracy fraction per (half-window, predictor); columns are
/// non-decreasing in z by construction.
struct AccuracyTable {
    std::vector<double> z_values;
    std::vector<std::string> predictor_ids;
    std::vector<std::vector<double>> cells;  // cells[zi][predictor]
};

using OutcomeSet = std::pair<std::string, std::vector<PredictionOutcome>>;

/// Tabulate windowed accuracy for several predictors scored over the same
/// actual eruptions; differing actual sets throw MismatchedActuals since
/// the comparison would be invalid.
AccuracyTable accuracy_table(const std::vector<OutcomeSet>& outcome_sets,
                             std::vector<double> z_values = default_z_values());

/// Score a fitted model over (duration, gap) samples. Outcomes carry the
/// model kind as predictor_id; times are gap-relative (minutes * 60).
std::vector<PredictionOutcome> evaluate_regression(const RegressionModel& model,
                                                   const std::vector<IntervalPair>& held_pairs);

/// One row of an external prediction feed (e.g. published NPS times).
struct ExternalPrediction {
    std::string geyser_id;
    EpochSeconds predicted = 0;
};

struct ExternalEvalResult {
    std::vector<PredictionOutcome> outcomes;
    std::size_t unmatched = 0;
};

/// Join external predictions to actual eruptions by nearest start within
/// join_window_min (published feeds carry no eruption ids). Unmatched
/// predictions are counted, not scored; zero matches throws NoMatches.
/// predictor_id = "external:<name>".
ExternalEvalResult evaluate_external(const std::vector<ExternalPrediction>& predictions,
                                     const std::vector<EruptionRecord>& actuals,
                                     const std::string& name, double join_window_min = 120.0);

/// Parse an external-prediction CSV (columns: geyser,predicted).
std::vector<ExternalPrediction> parse_external_predictions(std::string_view csv_text,
                                                           TimestampFormat format);

/// The published benchmark: at least 90% of predictions within +/-10 min.
bool meets_target(const std::vector<PredictionOutcome>& outcomes);

} // namespace geyser
