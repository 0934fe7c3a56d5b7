#include <doctest.h>

#include <zlib.h>

#include <fstream>
#include <sstream>

#include "rcpm/error.hpp"
#include "rcpm/log_model.hpp"

using namespace rcpm;

namespace {

std::string event_xml(const std::string& activity, const std::string& resource, const std::string& ts) {
    std::string s = "<event><string key=\"concept:name\" value=\"" + activity + "\"/>";
    if (!resource.empty()) s += "<string key=\"org:resource\" value=\"" + resource + "\"/>";
    if (!ts.empty()) s += "<date key=\"time:timestamp\" value=\"" + ts + "\"/>";
    return s + "</event>";
}

std::string xes(const std::vector<std::pair<std::string, std::vector<std::string>>>& traces) {
    std::string s = "<?xml version=\"1.0\"?><log xes.version=\"1.0\">";
    for (const auto& [id, events] : traces) {
        s += "<trace><string key=\"concept:name\" value=\"" + id + "\"/>";
        for (const auto& e : events) s += e;
        s += "</trace>";
    }
    return s + "</log>";
}

std::string gzip(const std::string& data) {
    z_stream zs{};
    deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8, Z_DEFAULT_STRATEGY);
    std::string out(deflateBound(&zs, data.size()) + 32, '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    deflate(&zs, Z_FINISH);
    out.resize(zs.total_out);
    deflateEnd(&zs);
    return out;
}

Event ev(std::string c, std::string a, std::string r, int minute, std::size_t order) {
    return {std::move(c), std::move(a), std::move(r), Timestamp{std::chrono::minutes(minute)}, order};
}

}  // namespace

TEST_CASE("parse_xes: minimal document") {
    auto log = parse_xes(xes({{"c1", {event_xml("A", "r1", "2020-01-01T00:00:00Z"),
                                      event_xml("B", "r1", "2020-01-01T00:01:00Z")}}}));
    CHECK(log.events.size() == 2);
    CHECK(log.activity_alphabet == std::vector<std::string>{"A", "B"});
    CHECK(log.resource_set == std::vector<std::string>{"r1"});
    CHECK(log.case_set == std::vector<std::string>{"c1"});
    CHECK(log.dropped_event_count == 0);
}

TEST_CASE("parse_xes: an event without resource is dropped and counted") {
    auto log = parse_xes(xes({{"c1", {event_xml("A", "r1", "2020-01-01T00:00:00Z"),
                                      event_xml("B", "", "2020-01-01T00:01:00Z"),
                                      event_xml("C", "r2", "2020-01-01T00:02:00Z")}}}));
    CHECK(log.events.size() == 2);
    CHECK(log.dropped_event_count == 1);
    CHECK(log.activity_alphabet == std::vector<std::string>{"A", "C"});
}

TEST_CASE("parse_xes: zero traces is an empty log") {
    CHECK_THROWS_AS(parse_xes(xes({})), EmptyLogError);
}

TEST_CASE("parse_xes: malformed XML reports a position") {
    try {
        parse_xes(std::string("<log>\n<trace><event></trace></log>"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("parse_xes: missing or bad timestamps are validation errors") {
    CHECK_THROWS_AS(parse_xes(xes({{"c1", {event_xml("A", "r1", "")}}})), ValidationError);
    CHECK_THROWS_AS(parse_xes(xes({{"c1", {event_xml("A", "r1", "yesterday")}}})), ValidationError);
}

TEST_CASE("parse_xes: timestamps are normalised to UTC") {
    auto log = parse_xes(xes({{"c1", {event_xml("A", "r1", "2012-03-31T18:09:05+02:00"),
                                      event_xml("B", "r1", "2012-03-31T16:09:05.000Z")}}}));
    CHECK(log.events[0].timestamp == log.events[1].timestamp);
    CHECK(format_iso8601(log.events[0].timestamp) == "2012-03-31T16:09:05.000000Z");
}

TEST_CASE("parse_xes: fixture with joined activity keys and skipped globals") {
    XesOptions o;
    o.activity_keys = {"concept:name", "lifecycle:transition"};
    auto log = load_event_log(std::string(RCPM_FIXTURES) + "/tiny.xes", "xes", o);
    CHECK(log.activity_alphabet ==
          std::vector<std::string>{"Accepted+In Progress", "Completed+Closed", "Queued+Awaiting Assignment"});
    CHECK(log.events.size() == 3);
    CHECK(log.dropped_event_count == 1);
    CHECK(log.case_set == std::vector<std::string>{"case-1", "case-2"});
    auto plain = load_event_log(std::string(RCPM_FIXTURES) + "/tiny.xes", "xes");
    CHECK(plain.activity_alphabet == std::vector<std::string>{"Accepted", "Completed", "Queued"});
}

TEST_CASE("gzip input is inflated transparently") {
    std::string doc = xes({{"c1", {event_xml("A", "r1", "2020-01-01T00:00:00Z")}}});
    CHECK(maybe_decompress(gzip(doc)) == doc);
    CHECK(parse_xes(maybe_decompress(gzip(doc))) == parse_xes(doc));
    CHECK(maybe_decompress(gzip("ab") + gzip("cd")) == "abcd");
    auto truncated = gzip(doc);
    truncated.resize(truncated.size() / 2);
    CHECK_THROWS_AS(maybe_decompress(truncated), ParseError);
    CHECK(maybe_decompress("plain") == "plain");
}

TEST_CASE("parse_csv: valid rows") {
    auto log = parse_csv(std::string("case,activity,resource,timestamp\n"
                                     "c1,A,r1,2020-01-01T00:00:00Z\n"
                                     "c1,B,r2,2020-01-01T00:01:00Z\n"
                                     "c2,A,r1,2020-01-01T00:02:00Z\n"));
    CHECK(log.events.size() == 3);
    CHECK(log.events[2].file_order == 2);
}

TEST_CASE("parse_csv: a timestamp mismatch names the row") {
    CsvMapping m;
    m.timestamp_format = "%Y-%m-%d %H:%M:%S";
    try {
        parse_csv(std::string("case,activity,resource,timestamp\n"
                              "c1,A,r1,2020-01-01 00:00:00\n"
                              "c1,B,r1,01/02/2020\n"),
                  m);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
}

TEST_CASE("parse_csv: duplicate rows stay distinct events") {
    auto log = parse_csv(std::string("case,activity,resource,timestamp\n"
                                     "c1,A,r1,2020-01-01T00:00:00Z\n"
                                     "c1,A,r1,2020-01-01T00:00:00Z\n"));
    REQUIRE(log.events.size() == 2);
    CHECK(log.events[0].file_order != log.events[1].file_order);
}

TEST_CASE("parse_csv: mapping, delimiter, dropped resources, errors") {
    CsvMapping m;
    m.case_column = "Case ID";
    m.activity_column = "Activity";
    m.resource_column = "Resource";
    m.timestamp_column = "Start";
    m.delimiter = ';';
    auto log = parse_csv(std::string("Activity;Case ID;Start;Resource\n"
                                     "\"A;x\";1;2020-01-01T00:00:00Z;\n"
                                     "B;1;2020-01-01T00:00:00Z;bob\n"),
                         m);
    CHECK(log.events.size() == 1);
    CHECK(log.dropped_event_count == 1);
    CHECK(log.events[0].file_order == 1);
    CHECK_THROWS_AS(parse_csv(std::string("case,activity,timestamp\nc,A,2020-01-01\n")), ConfigError);
    CHECK_THROWS_AS(parse_csv(std::string("case,activity,resource,timestamp\n")), EmptyLogError);
    CHECK_THROWS_AS(parse_csv(std::string("case,activity,resource,timestamp\nc,,r,2020-01-01\n")), ValidationError);
}

TEST_CASE("load_event_log: unknown format and missing file") {
    CHECK_THROWS_AS(load_event_log(std::string(RCPM_FIXTURES) + "/tiny.csv", "parquet"), ConfigError);
    CHECK_THROWS(load_event_log("/nonexistent/file.csv", "csv"));
}

TEST_CASE("resource_view: hand-sorted example") {
    auto log = EventLog::from_events({ev("c1", "A", "r1", 1, 0), ev("c1", "B", "r2", 1, 1), ev("c2", "C", "r1", 2, 2)});
    auto view = resource_view(log);
    CHECK(view.sequences.size() == 2);
    CHECK(view.sequences.at("r1") == std::vector<std::string>{"A", "C"});
    CHECK(view.sequences.at("r2") == std::vector<std::string>{"B"});
}

TEST_CASE("resource_view: equal timestamps keep file order") {
    auto log = EventLog::from_events({ev("c1", "B", "r1", 5, 1), ev("c1", "A", "r1", 5, 0)});
    CHECK(resource_view(log).sequences.at("r1") == std::vector<std::string>{"A", "B"});
    auto single = EventLog::from_events({ev("c1", "A", "r1", 0, 0)});
    CHECK(resource_view(single).sequences.at("r1") == std::vector<std::string>{"A"});
}

TEST_CASE("case_view: hand-sorted example") {
    auto log = EventLog::from_events({ev("c1", "B", "r1", 2, 0), ev("c1", "A", "r2", 1, 1), ev("c2", "A", "r1", 1, 2)});
    auto view = case_view(log);
    CHECK(view.sequences.at("c1") == std::vector<std::string>{"A", "B"});
    CHECK(view.sequences.at("c2") == std::vector<std::string>{"A"});
    CHECK(view.event_count() == 3);
}

TEST_CASE("EventLog invariants are enforced") {
    CHECK_THROWS_AS(EventLog::from_events({}), EmptyLogError);
    CHECK_THROWS_AS(EventLog::from_events({ev("c", "", "r", 0, 0)}), ValidationError);
    CHECK_THROWS_AS(EventLog::from_events({ev("c", "A", "r", 0, 0), ev("c", "B", "r", 0, 0)}), ValidationError);
}

TEST_CASE("serialize is stable across formats") {
    auto from_csv = parse_csv(std::string("case,activity,resource,timestamp\nc1,A,r1,2020-01-01T00:00:00Z\n"));
    auto from_xes = parse_xes(xes({{"c1", {event_xml("A", "r1", "2020-01-01T00:00:00.000+00:00")}}}));
    CHECK(serialize(from_csv) == serialize(from_xes));
}
