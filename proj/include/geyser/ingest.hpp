#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geyser/time_utils.hpp"

namespace geyser {

/// Timestamp resolution of a logged event. Hour-precision events are too
/// coarse for interval work and get filtered downstream.
enum class Precision { hour, minute, second };

std::string_view to_string(Precision p);
bool precision_from_string(std::string_view text, Precision& out);

/// One logged eruption event, normalized to epoch seconds UTC.
struct EruptionRecord {
    std::string geyser_id;
    EpochSeconds start = 0;
    std::optional<EpochSeconds> end;
    std::optional<double> duration_s;  // non-negative, seconds
    Precision precision = Precision::second;
    bool precision_explicit = false;  // true when the source had a precision column
    std::size_t source_row = 0;       // 1-based row in the input (header = row 1)

    /// End time in seconds: explicit end wins, else start + duration_s.
    std::optional<double> resolved_end() const;
    /// Eruption length in minutes: explicit duration wins, else end - start.
    std::optional<double> duration_min() const;

    /// Field-wise equality ignoring source position.
    bool same_event(const EruptionRecord& other) const;
};

enum class TimestampFormat { epoch_seconds, iso8601 };

/// Decouples the pipeline from any particular export schema: canonical
/// field name -> source column header. geyser_id and start are mandatory.
struct ColumnMapping {
    std::map<std::string, std::string> columns;
    TimestampFormat timestamp_format = TimestampFormat::epoch_seconds;

    void validate() const;  // throws ConfigError

    /// Reads `canonical=source_header` pairs plus `timestamp_format=`.
    static ColumnMapping from_kv(std::string_view text);
    static ColumnMapping load(const std::string& path);

    /// Identity mapping over the canonical CSV emitted by to_canonical_csv.
    static ColumnMapping canonical();
};

struct RowError {
    std::size_t row = 0;  // 1-based row in the input (header = row 1)
    std::string reason;
};

struct ParseResult {
    std::vector<EruptionRecord> records;
    std::vector<RowError> errors;
};

/// Parse a raw CSV export into validated records. Malformed rows become
/// RowErrors and are excluded; records + errors account for every data row
/// in input order. Throws MissingColumn when a mapped header is absent.
ParseResult parse_records(std::string_view raw_text, const ColumnMapping& mapping);

/// Explicit precision column wins; otherwise classify by divisibility of
/// the start timestamp (3600 -> hour, 60 -> minute, else second).
Precision infer_precision(const EruptionRecord& record);

/// Replace each record's precision with infer_precision(record).
void apply_inferred_precision(std::vector<EruptionRecord>& records);

/// Canonical CSV form: header `geyser_id,start,end,duration_s,precision`,
/// epoch-second timestamps, shortest round-trippable duration formatting.
std::string to_canonical_csv(const std::vector<EruptionRecord>& records);

} // namespace geyser
