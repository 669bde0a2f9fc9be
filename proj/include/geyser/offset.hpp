#pragma once

#include <utility>
#include <vector>

#include "geyser/prep.hpp"

namespace geyser {

/// Central-tendency estimates of the indicator-to-main offset, minutes.
/// mode_min is computed on whole-minute bins (smallest bin wins ties).
struct OffsetStats {
    double mean_min = 0.0;
    double median_min = 0.0;
    double mode_min = 0.0;
    std::size_t n = 0;
};

OffsetStats offset_stats(const std::vector<OffsetPairing>& pairings);  // throws EmptyInput

/// Predicted main-eruption time: indicator start plus a constant, as
/// seconds since epoch (fractional when c_min is).
double offset_predict(EpochSeconds indicator_start, double c_min);  // c_min > 0

/// Window reading for the grid objective: symmetric |offset - c| <= w, or
/// forward 0 <= offset - c <= w (sensitivity switch; see README).
enum class WindowMode { symmetric, forward };

struct GridSearchOptions {
    double lo_min = 11.9;
    double hi_min = 14.0;
    double step_min = 0.1;
    double half_window_min = 10.0;
    WindowMode window_mode = WindowMode::symmetric;

    void validate() const;  // throws ConfigError
};

/// Accuracy curve over the offset grid plus its argmax (smallest offset on
/// ties). grid holds (offset, accuracy) points in grid order.
struct GridSearchResult {
    double best_offset_min = 0.0;
    double best_accuracy = 0.0;
    std::vector<std::pair<double, double>> grid;
};

GridSearchResult optimal_offset(const std::vector<OffsetPairing>& pairings,
                                const GridSearchOptions& opts = {});  // throws EmptyInput

/// OLS of offset against sequence index: (slope per eruption, intercept).
std::pair<double, double> trend_slope(const std::vector<OffsetPairing>& pairings);

} // namespace geyser
