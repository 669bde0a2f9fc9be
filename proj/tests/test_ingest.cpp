#include <doctest.h>

#include "geyser/csv.hpp"
#include "geyser/errors.hpp"
#include "geyser/ingest.hpp"
#include "geyser/kvfile.hpp"
#include "geyser/time_utils.hpp"

#include "test_support.hpp"

using namespace geyser;

namespace {

ColumnMapping epoch_mapping() {
    return ColumnMapping::from_kv("geyser_id=geyser\nstart=start\n"
                                  "end=end\nduration_s=duration\n"
                                  "timestamp_format=epoch_seconds\n");
}

} // namespace

TEST_CASE("csv: rfc-4180 quoting, escapes and line endings") {
    const auto table = parse_csv("a,b,c\r\n\"x,1\",\"he said \"\"hi\"\"\",\"two\nlines\"\n,,\n");
    REQUIRE(table.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][0] == "x,1");
    CHECK(table.rows[0][1] == "he said \"hi\"");
    CHECK(table.rows[0][2] == "two\nlines");
    CHECK(table.rows[1] == std::vector<std::string>{"", "", ""});

    CHECK_THROWS_AS(parse_csv("a,b\n\"oops"), CsvError);
    CHECK_THROWS_AS(parse_csv(""), CsvError);

    // blank lines are skipped, final newline optional
    const auto sparse = parse_csv("h\n\nv1\n\nv2");
    CHECK(sparse.rows.size() == 2);
}

TEST_CASE("csv: escape round-trip") {
    std::string out;
    append_csv_row(out, {"plain", "with,comma", "with\"quote", "with\nnewline"});
    const auto back = parse_csv("h1,h2,h3,h4\n" + out);
    REQUIRE(back.rows.size() == 1);
    CHECK(back.rows[0][1] == "with,comma");
    CHECK(back.rows[0][2] == "with\"quote");
    CHECK(back.rows[0][3] == "with\nnewline");
}

TEST_CASE("time: iso-8601 parsing") {
    EpochSeconds t = 0;
    REQUIRE(parse_iso8601("2010-01-01T00:00:00Z", t));
    CHECK(t == 1262304000);
    REQUIRE(parse_iso8601("2010-01-01 00:00:00", t));  // space separator, implied UTC
    CHECK(t == 1262304000);
    REQUIRE(parse_iso8601("2010-01-01T00:00", t));     // seconds optional
    CHECK(t == 1262304000);
    REQUIRE(parse_iso8601("2009-12-31T17:00:00-07:00", t));
    CHECK(t == 1262304000);
    REQUIRE(parse_iso8601("2010-01-01T02:30:00+02:30", t));
    CHECK(t == 1262304000);
    REQUIRE(parse_iso8601("2016-02-29T12:00:00Z", t));  // leap day

    CHECK_FALSE(parse_iso8601("2015-02-29T12:00:00Z", t));
    CHECK_FALSE(parse_iso8601("2010-13-01T00:00:00Z", t));
    CHECK_FALSE(parse_iso8601("2010-01-01T24:00:00Z", t));
    CHECK_FALSE(parse_iso8601("not-a-time", t));
    CHECK_FALSE(parse_iso8601("2010-01-01T00:00:00Zjunk", t));

    CHECK(format_iso8601_utc(1262304000) == "2010-01-01T00:00:00Z");
    CHECK(format_iso8601_utc(-1) == "1969-12-31T23:59:59Z");
}

TEST_CASE("time: epoch parsing is strict") {
    EpochSeconds t = 0;
    REQUIRE(parse_epoch_seconds("1262304000", t));
    CHECK(t == 1262304000);
    REQUIRE(parse_epoch_seconds("-86400", t));
    CHECK(t == -86400);
    CHECK_FALSE(parse_epoch_seconds("12.5", t));
    CHECK_FALSE(parse_epoch_seconds("", t));
    CHECK_FALSE(parse_epoch_seconds("12 ", t));
}

TEST_CASE("kvfile: parsing and precedence") {
    const auto kv = KvFile::parse("# comment\n a = 1 \nb=two\na=3\n\n");
    CHECK(kv.get("a") == "3");  // last duplicate wins
    CHECK(kv.get("b") == "two");
    CHECK(kv.get("missing", "fallback") == "fallback");
    CHECK_THROWS_AS(KvFile::parse("no-equals-here\n"), ConfigError);
}

TEST_CASE("parse_records: direct field copy") {
    ColumnMapping mapping;
    mapping.columns = {{"geyser_id", "geyser"}, {"start", "start"}};
    const auto result = parse_records("geyser,start\nOld Faithful,1262304000\n", mapping);
    REQUIRE(result.records.size() == 1);
    CHECK(result.errors.empty());
    const auto& rec = result.records[0];
    CHECK(rec.geyser_id == "Old Faithful");
    CHECK(rec.start == 1262304000);
    CHECK(rec.precision == Precision::second);  // default, nothing inferred yet
    CHECK_FALSE(rec.precision_explicit);
    CHECK(rec.source_row == 2);
}

TEST_CASE("parse_records: empty duration column means absent, no error") {
    const auto result =
        parse_records("geyser,start,end,duration\ng,100,,\n", epoch_mapping());
    REQUIRE(result.records.size() == 1);
    CHECK(result.errors.empty());
    CHECK_FALSE(result.records[0].duration_s.has_value());
    CHECK_FALSE(result.records[0].end.has_value());
}

TEST_CASE("parse_records: unparseable start yields a RowError, not a record") {
    const auto result =
        parse_records("geyser,start,end,duration\ng,not-a-time,,\n", epoch_mapping());
    CHECK(result.records.empty());
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].row == 2);
}

TEST_CASE("parse_records: per-row validation failures are collected") {
    const std::string text =
        "geyser,start,end,duration\n"
        "g,100,400,300\n"         // ok
        "g,100,,-5\n"             // negative duration
        "g,100,50,\n"             // end precedes start
        "g,100,400,100\n"         // end-start disagrees with duration by 200 s
        "g,100,140,60\n"          // 20 s disagreement: within the 60 s slack
        ",100,,\n"                // empty geyser id
        "g,100\n";                // field count mismatch
    const auto result = parse_records(text, epoch_mapping());
    CHECK(result.records.size() == 2);
    CHECK(result.errors.size() == 5);
    // order preserved, records + errors account for every data row
    CHECK(result.records.size() + result.errors.size() == 7);
    CHECK(result.records[0].source_row == 2);
    CHECK(result.records[1].source_row == 6);
}

TEST_CASE("parse_records: missing mapped column aborts") {
    ColumnMapping mapping;
    mapping.columns = {{"geyser_id", "geyser"}, {"start", "nonexistent"}};
    CHECK_THROWS_AS(parse_records("geyser,start\ng,1\n", mapping), MissingColumn);
}

TEST_CASE("parse_records: explicit precision column wins") {
    ColumnMapping mapping = epoch_mapping();
    mapping.columns["precision"] = "prec";
    const std::string text =
        "geyser,start,end,duration,prec\n"
        "g,7200,,240,second\n"    // hour-divisible but explicitly second
        "g,7261,,240,\n"          // empty cell: not explicit
        "g,7261,,240,fortnight\n";
    const auto result = parse_records(text, mapping);
    REQUIRE(result.records.size() == 2);
    CHECK(result.errors.size() == 1);  // unknown precision token
    CHECK(result.records[0].precision == Precision::second);
    CHECK(result.records[0].precision_explicit);
    CHECK(infer_precision(result.records[0]) == Precision::second);  // passthrough
    CHECK_FALSE(result.records[1].precision_explicit);
}

TEST_CASE("infer_precision: divisibility fallback") {
    EruptionRecord rec;
    rec.start = 7200;
    CHECK(infer_precision(rec) == Precision::hour);
    rec.start = 7260;
    CHECK(infer_precision(rec) == Precision::minute);
    rec.start = 7261;
    CHECK(infer_precision(rec) == Precision::second);
    rec.start = -7260;  // pre-epoch timestamps classify the same way
    CHECK(infer_precision(rec) == Precision::minute);
}

TEST_CASE("parse_records: deterministic and canonical round-trip") {
    const std::string text = testsupport::read_fixture("oldfaithful.csv");
    const auto mapping = ColumnMapping::load(testsupport::fixture_path("mapping_iso.cfg"));

    const auto first = parse_records(text, mapping);
    const auto second = parse_records(text, mapping);
    REQUIRE(first.records.size() == second.records.size());
    for (std::size_t i = 0; i < first.records.size(); ++i)
        CHECK(first.records[i].same_event(second.records[i]));

    // count invariant over the fixture: records + errors = data rows
    const auto raw = parse_csv(text);
    CHECK(first.records.size() + first.errors.size() == raw.rows.size());
    CHECK(first.errors.size() == 4);  // the fixture's malformed tail rows

    // round-trip through canonical CSV preserves every parsed field
    const std::string canonical = to_canonical_csv(first.records);
    const auto reparsed = parse_records(canonical, ColumnMapping::canonical());
    CHECK(reparsed.errors.empty());
    REQUIRE(reparsed.records.size() == first.records.size());
    for (std::size_t i = 0; i < first.records.size(); ++i)
        CHECK(first.records[i].same_event(reparsed.records[i]));
}

TEST_CASE("mapping: loads from kv text and validates") {
    CHECK_THROWS_AS(ColumnMapping::from_kv("start=s\n"), ConfigError);       // geyser_id missing
    CHECK_THROWS_AS(ColumnMapping::from_kv("geyser_id=g\nstart=s\nbogus=x\n"), ConfigError);
    CHECK_THROWS_AS(ColumnMapping::from_kv("geyser_id=g\nstart=s\ntimestamp_format=nope\n"),
                    ConfigError);
    const auto mapping =
        ColumnMapping::from_kv("geyser_id=g\nstart=s\ntimestamp_format=iso8601\n");
    CHECK(mapping.timestamp_format == TimestampFormat::iso8601);
}
