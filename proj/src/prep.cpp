#include "geyser/prep.hpp"

#include <algorithm>
#include <string>

#include "geyser/errors.hpp"

namespace geyser {

namespace {

bool start_less(const EruptionRecord& a, const EruptionRecord& b) { return a.start < b.start; }

} // namespace

void FilterConfig::validate() const {
    if (!(interval_min_minutes > 0.0) || !(interval_max_minutes > 0.0) ||
        !(interval_min_minutes < interval_max_minutes))
        throw ConfigError("interval bounds must satisfy 0 < min < max");
}

FilterResult filter_series(std::vector<EruptionRecord> records, const FilterConfig& cfg) {
    cfg.validate();
    for (const auto& rec : records)
        if (rec.geyser_id != records.front().geyser_id)
            throw PreconditionError("filter_series: records mix geyser ids ('" +
                                    records.front().geyser_id + "' vs '" + rec.geyser_id + "')");

    std::stable_sort(records.begin(), records.end(), start_less);

    FilterResult result;
    result.report.input_count = records.size();
    for (auto& rec : records) {
        if (rec.start < cfg.min_start) {
            ++result.report.removed_before_min_start;
        } else if (cfg.drop_hour_precision && rec.precision == Precision::hour) {
            ++result.report.removed_hour_precision;
        } else if (!rec.end && !rec.duration_s) {
            ++result.report.removed_unresolvable;
        } else {
            result.records.push_back(std::move(rec));
        }
    }
    result.report.kept = result.records.size();
    if (result.records.empty())
        throw EmptyResult("filter_series: no records survive the configured rules (input " +
                          std::to_string(result.report.input_count) + ")");
    return result;
}

std::vector<IntervalPair> build_interval_pairs(const std::vector<EruptionRecord>& records,
                                               const FilterConfig& cfg) {
    cfg.validate();
    if (!std::is_sorted(records.begin(), records.end(), start_less))
        throw PreconditionError("build_interval_pairs: records must be sorted ascending by start");

    std::vector<std::size_t> unresolvable;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (!records[i].resolved_end()) unresolvable.push_back(i);
    if (!unresolvable.empty())
        throw UnresolvableEnd("build_interval_pairs: " + std::to_string(unresolvable.size()) +
                                  " record(s) have neither end nor duration",
                              std::move(unresolvable));

    std::vector<IntervalPair> pairs;
    if (records.size() < 2) return pairs;
    pairs.reserve(records.size() - 1);
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        const double end_i = *records[i].resolved_end();
        const double x = *records[i].duration_min();
        const double y = (static_cast<double>(records[i + 1].start) - end_i) / 60.0;
        if (x <= 0.0) continue;  // zero-length eruption cannot serve as a sample
        if (y < cfg.interval_min_minutes || y > cfg.interval_max_minutes) continue;
        pairs.push_back({x, y, i});
    }
    return pairs;
}

PairingResult pair_indicator_main(std::vector<EruptionRecord> indicator,
                                  std::vector<EruptionRecord> main, double max_lag_min) {
    if (!(max_lag_min > 0.0))
        throw PreconditionError("pair_indicator_main: max_lag_min must be positive");
    std::sort(indicator.begin(), indicator.end(), start_less);
    std::sort(main.begin(), main.end(), start_less);

    const auto max_lag_s = max_lag_min * 60.0;
    std::vector<bool> used(indicator.size(), false);

    PairingResult result;
    for (const auto& m : main) {
        // candidates end strictly before the main start (offset must be > 0)
        auto hi = std::lower_bound(indicator.begin(), indicator.end(), m,
                                   [](const EruptionRecord& a, const EruptionRecord& b) {
                                       return a.start < b.start;
                                   });
        bool matched = false;
        for (auto it = hi; it != indicator.begin();) {
            --it;
            const double lag_s = static_cast<double>(m.start - it->start);
            if (lag_s > max_lag_s) break;  // further candidates are older still
            const std::size_t idx = static_cast<std::size_t>(it - indicator.begin());
            if (used[idx]) continue;
            used[idx] = true;
            result.pairings.push_back({it->start, m.start, lag_s / 60.0, 0});
            matched = true;
            break;
        }
        if (!matched) ++result.unmatched_main;
    }
    for (std::size_t k = 0; k < result.pairings.size(); ++k)
        result.pairings[k].sequence_index = k + 1;
    return result;
}

} // namespace geyser
