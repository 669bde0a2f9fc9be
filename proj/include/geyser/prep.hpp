#pragma once

#include <cstddef>
#include <vector>

#include "geyser/ingest.hpp"

namespace geyser {

/// Series-level cleaning rules. Defaults follow the Old Faithful recipe:
/// keep 2010 onwards, drop hour-precision points, expect gaps of 34-110 min.
struct FilterConfig {
    EpochSeconds min_start = 1262304000;  // 2010-01-01T00:00:00Z
    double interval_min_minutes = 34.0;
    double interval_max_minutes = 110.0;
    bool drop_hour_precision = true;

    void validate() const;  // throws ConfigError
};

/// Removal counts per rule, first matching rule wins.
struct FilterReport {
    std::size_t input_count = 0;
    std::size_t kept = 0;
    std::size_t removed_before_min_start = 0;
    std::size_t removed_hour_precision = 0;
    std::size_t removed_unresolvable = 0;  // neither end nor duration
};

struct FilterResult {
    std::vector<EruptionRecord> records;  // sorted ascending by start
    FilterReport report;
};

/// Apply the cleaning rules to one geyser's series. Throws EmptyResult when
/// nothing survives (or the input is empty) and PreconditionError when the
/// records mix geyser ids.
FilterResult filter_series(std::vector<EruptionRecord> records, const FilterConfig& cfg);

/// One regression sample: x = duration of eruption i (minutes), y = gap
/// from the end of eruption i to the start of eruption i+1 (minutes).
struct IntervalPair {
    double x_duration_min = 0.0;
    double y_gap_min = 0.0;
    std::size_t i = 0;  // index of the earlier eruption in the input list
};

/// Build one candidate pair per consecutive record pair and keep those whose
/// gap lies inside [interval_min, interval_max]; dormancy gaps exceed the
/// bound and are severed automatically. Records must be sorted ascending and
/// each must resolve an end time, else UnresolvableEnd lists the offenders.
std::vector<IntervalPair> build_interval_pairs(const std::vector<EruptionRecord>& records,
                                               const FilterConfig& cfg);

/// One matched (indicator eruption, main eruption) pair.
struct OffsetPairing {
    EpochSeconds indicator_start = 0;
    EpochSeconds main_start = 0;
    double offset_min = 0.0;  // main_start - indicator_start, minutes; > 0
    std::size_t sequence_index = 0;  // 1..n in main-start order
};

struct PairingResult {
    std::vector<OffsetPairing> pairings;
    std::size_t unmatched_main = 0;
};

/// Match each main eruption with the latest not-yet-used indicator eruption
/// that precedes it by at most max_lag_min minutes. Inputs are sorted
/// internally, so the result does not depend on incoming order. Empty output
/// is legal (dormant periods).
PairingResult pair_indicator_main(std::vector<EruptionRecord> indicator,
                                  std::vector<EruptionRecord> main, double max_lag_min);

} // namespace geyser
