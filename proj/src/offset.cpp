#include "geyser/offset.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "geyser/errors.hpp"
#include "geyser/regress.hpp"

namespace geyser {

OffsetStats offset_stats(const std::vector<OffsetPairing>& pairings) {
    if (pairings.empty()) throw EmptyInput("offset_stats: no pairings");

    OffsetStats stats;
    stats.n = pairings.size();

    // plain left-to-right accumulation, matched by the brute-force oracle
    double sum = 0.0;
    for (const auto& p : pairings) sum += p.offset_min;
    stats.mean_min = sum / static_cast<double>(pairings.size());

    std::vector<double> sorted;
    sorted.reserve(pairings.size());
    for (const auto& p : pairings) sorted.push_back(p.offset_min);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    stats.median_min =
        sorted.size() % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;

    std::map<long long, std::size_t> bins;  // whole-minute bins
    for (const auto& p : pairings) ++bins[std::llround(p.offset_min)];
    long long mode_bin = bins.begin()->first;
    std::size_t mode_count = bins.begin()->second;
    for (const auto& [bin, count] : bins) {
        if (count > mode_count) {  // ties keep the smallest bin
            mode_bin = bin;
            mode_count = count;
        }
    }
    stats.mode_min = static_cast<double>(mode_bin);
    return stats;
}

double offset_predict(EpochSeconds indicator_start, double c_min) {
    if (!(c_min > 0.0)) throw PreconditionError("offset_predict: constant must be positive");
    return static_cast<double>(indicator_start) + c_min * 60.0;
}

void GridSearchOptions::validate() const {
    if (!(lo_min < hi_min)) throw ConfigError("grid search: lo must be below hi");
    if (!(step_min > 0.0)) throw ConfigError("grid search: step must be positive");
    if (!(half_window_min > 0.0)) throw ConfigError("grid search: window must be positive");
}

GridSearchResult optimal_offset(const std::vector<OffsetPairing>& pairings,
                                const GridSearchOptions& opts) {
    opts.validate();
    if (pairings.empty()) throw EmptyInput("optimal_offset: no pairings");

    const auto steps = static_cast<std::size_t>(
        std::llround((opts.hi_min - opts.lo_min) / opts.step_min));
    const double total = static_cast<double>(pairings.size());

    GridSearchResult result;
    result.grid.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double c = opts.lo_min + static_cast<double>(i) * opts.step_min;
        std::size_t hits = 0;
        for (const auto& p : pairings) {
            const double d = p.offset_min - c;
            const bool within = opts.window_mode == WindowMode::symmetric
                                    ? std::abs(d) <= opts.half_window_min
                                    : d >= 0.0 && d <= opts.half_window_min;
            if (within) ++hits;
        }
        const double accuracy = static_cast<double>(hits) / total;
        result.grid.emplace_back(c, accuracy);
        if (result.grid.size() == 1 || accuracy > result.best_accuracy) {
            result.best_offset_min = c;
            result.best_accuracy = accuracy;
        }
    }
    return result;
}

std::pair<double, double> trend_slope(const std::vector<OffsetPairing>& pairings) {
    Eigen::ArrayXd x(static_cast<Eigen::Index>(pairings.size()));
    Eigen::ArrayXd y(static_cast<Eigen::Index>(pairings.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const auto& p = pairings[static_cast<std::size_t>(i)];
        x[i] = static_cast<double>(p.sequence_index);
        y[i] = p.offset_min;
    }
    const OlsLine line = ols_line(x, y);
    return {line.slope, line.intercept};
}

} // namespace geyser
