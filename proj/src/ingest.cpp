#include "geyser/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "geyser/csv.hpp"
#include "geyser/errors.hpp"
#include "geyser/kvfile.hpp"

namespace geyser {

namespace {

constexpr std::array<std::string_view, 5> kCanonicalFields = {"geyser_id", "start", "end",
                                                              "duration_s", "precision"};

// end-vs-duration disagreement allowed before the row is rejected
constexpr double kDurationSlackS = 60.0;

bool parse_double(std::string_view text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::string_view to_string(Precision p) {
    switch (p) {
    case Precision::hour: return "hour";
    case Precision::minute: return "minute";
    case Precision::second: return "second";
    }
    return "second";
}

bool precision_from_string(std::string_view text, Precision& out) {
    const std::string t = lowercase(std::string_view(trim(text)));
    if (t == "hour" || t == "hours" || t == "h") {
        out = Precision::hour;
    } else if (t == "minute" || t == "minutes" || t == "min" || t == "m") {
        out = Precision::minute;
    } else if (t == "second" || t == "seconds" || t == "sec" || t == "s") {
        out = Precision::second;
    } else {
        return false;
    }
    return true;
}

std::optional<double> EruptionRecord::resolved_end() const {
    if (end) return static_cast<double>(*end);
    if (duration_s) return static_cast<double>(start) + *duration_s;
    return std::nullopt;
}

std::optional<double> EruptionRecord::duration_min() const {
    if (duration_s) return *duration_s / 60.0;
    if (end) return static_cast<double>(*end - start) / 60.0;
    return std::nullopt;
}

bool EruptionRecord::same_event(const EruptionRecord& other) const {
    return geyser_id == other.geyser_id && start == other.start && end == other.end &&
           duration_s == other.duration_s && precision == other.precision &&
           precision_explicit == other.precision_explicit;
}

void ColumnMapping::validate() const {
    for (const auto& [canonical, source] : columns) {
        if (std::find(kCanonicalFields.begin(), kCanonicalFields.end(), canonical) ==
            kCanonicalFields.end())
            throw ConfigError("unknown canonical field in mapping: " + canonical);
        if (source.empty())
            throw ConfigError("empty source header for canonical field: " + canonical);
    }
    if (!columns.count("geyser_id") || !columns.count("start"))
        throw ConfigError("mapping must name columns for geyser_id and start");
}

ColumnMapping ColumnMapping::from_kv(std::string_view text) {
    const KvFile kv = KvFile::parse(text);
    ColumnMapping mapping;
    for (const auto& [key, value] : kv.entries()) {
        if (key == "timestamp_format") {
            if (value == "epoch_seconds") {
                mapping.timestamp_format = TimestampFormat::epoch_seconds;
            } else if (value == "iso8601") {
                mapping.timestamp_format = TimestampFormat::iso8601;
            } else {
                throw ConfigError("timestamp_format must be epoch_seconds or iso8601, got '" +
                                  value + "'");
            }
        } else {
            mapping.columns[key] = value;
        }
    }
    mapping.validate();
    return mapping;
}

ColumnMapping ColumnMapping::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open mapping file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_kv(buf.str());
}

ColumnMapping ColumnMapping::canonical() {
    ColumnMapping mapping;
    for (const auto field : kCanonicalFields) mapping.columns[std::string(field)] = field;
    mapping.timestamp_format = TimestampFormat::epoch_seconds;
    return mapping;
}

namespace {

bool parse_timestamp(std::string_view text, TimestampFormat fmt, EpochSeconds& out) {
    return fmt == TimestampFormat::epoch_seconds ? parse_epoch_seconds(text, out)
                                                 : parse_iso8601(text, out);
}

} // namespace

ParseResult parse_records(std::string_view raw_text, const ColumnMapping& mapping) {
    mapping.validate();
    const CsvTable table = parse_csv(raw_text);

    // canonical field -> column index in this export
    std::map<std::string, std::size_t> index;
    for (const auto& [canonical, source] : mapping.columns) {
        const auto it = std::find(table.header.begin(), table.header.end(), source);
        if (it == table.header.end())
            throw MissingColumn("mapped column '" + source + "' (" + canonical +
                                ") not found in CSV header");
        index[canonical] = static_cast<std::size_t>(it - table.header.begin());
    }

    ParseResult result;
    result.records.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t source_row = r + 2;  // header is row 1

        const auto fail = [&](std::string reason) {
            result.errors.push_back({source_row, std::move(reason)});
        };
        const auto cell = [&](const char* canonical) -> std::string_view {
            const auto it = index.find(canonical);
            if (it == index.end()) return {};
            return trim(row[it->second]);
        };

        if (row.size() != table.header.size()) {
            fail("expected " + std::to_string(table.header.size()) + " fields, got " +
                 std::to_string(row.size()));
            continue;
        }

        EruptionRecord rec;
        rec.source_row = source_row;
        rec.geyser_id = std::string(cell("geyser_id"));
        if (rec.geyser_id.empty()) {
            fail("empty geyser_id");
            continue;
        }

        const std::string_view start_text = cell("start");
        if (!parse_timestamp(start_text, mapping.timestamp_format, rec.start)) {
            fail("unparseable start timestamp '" + std::string(start_text) + "'");
            continue;
        }

        bool row_ok = true;
        if (const std::string_view end_text = cell("end"); !end_text.empty()) {
            EpochSeconds end = 0;
            if (!parse_timestamp(end_text, mapping.timestamp_format, end)) {
                fail("unparseable end timestamp '" + std::string(end_text) + "'");
                row_ok = false;
            } else if (end < rec.start) {
                fail("end precedes start");
                row_ok = false;
            } else {
                rec.end = end;
            }
        }
        if (!row_ok) continue;

        if (const std::string_view dur_text = cell("duration_s"); !dur_text.empty()) {
            double dur = 0.0;
            if (!parse_double(dur_text, dur)) {
                fail("unparseable duration '" + std::string(dur_text) + "'");
                continue;
            }
            if (dur < 0.0) {
                fail("negative duration");
                continue;
            }
            rec.duration_s = dur;
        }
        if (rec.end && rec.duration_s &&
            std::abs(static_cast<double>(*rec.end - rec.start) - *rec.duration_s) >
                kDurationSlackS) {
            fail("duration disagrees with end - start by more than 60 s");
            continue;
        }

        if (const std::string_view prec_text = cell("precision"); !prec_text.empty()) {
            Precision p{};
            if (!precision_from_string(prec_text, p)) {
                fail("unknown precision '" + std::string(prec_text) + "'");
                continue;
            }
            rec.precision = p;
            rec.precision_explicit = true;
        }

        result.records.push_back(std::move(rec));
    }
    return result;
}

Precision infer_precision(const EruptionRecord& record) {
    if (record.precision_explicit) return record.precision;
    if (record.start % 3600 == 0) return Precision::hour;
    if (record.start % 60 == 0) return Precision::minute;
    return Precision::second;
}

void apply_inferred_precision(std::vector<EruptionRecord>& records) {
    for (auto& rec : records) rec.precision = infer_precision(rec);
}

std::string to_canonical_csv(const std::vector<EruptionRecord>& records) {
    std::string out = "geyser_id,start,end,duration_s,precision\n";
    char buf[64];
    for (const auto& rec : records) {
        std::vector<std::string> fields;
        fields.push_back(rec.geyser_id);
        fields.push_back(std::to_string(rec.start));
        fields.push_back(rec.end ? std::to_string(*rec.end) : std::string());
        if (rec.duration_s) {
            std::snprintf(buf, sizeof(buf), "%.17g", *rec.duration_s);
            fields.emplace_back(buf);
        } else {
            fields.emplace_back();
        }
        fields.emplace_back(rec.precision_explicit ? to_string(rec.precision)
                                                   : std::string_view());
        append_csv_row(out, fields);
    }
    return out;
}

} // namespace geyser
