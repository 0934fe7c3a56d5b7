#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rcpm/timestamp.hpp"

namespace rcpm {

struct Event {
    std::string case_id;
    std::string activity;
    std::string resource;
    Timestamp timestamp;
    std::size_t file_order = 0;  // position of the event in its source file

    friend bool operator==(const Event&, const Event&) = default;
};

/// Validated events of one log. Only events carrying a resource are retained;
/// the rest are counted in `dropped_event_count`. The three sets are sorted
/// and hold exactly the values occurring in `events`.
struct EventLog {
    std::vector<Event> events;
    std::vector<std::string> activity_alphabet;
    std::vector<std::string> resource_set;
    std::vector<std::string> case_set;
    std::size_t dropped_event_count = 0;

    /// Builds a log from retained events, deriving the three sets.
    /// Throws ValidationError on an empty activity or a repeated file_order,
    /// EmptyLogError when `events` is empty.
    static EventLog from_events(std::vector<Event> events, std::size_t dropped_event_count = 0);

    friend bool operator==(const EventLog&, const EventLog&) = default;
};

/// Chronologically ordered activity sequences keyed by resource or case id.
struct SequenceView {
    std::map<std::string, std::vector<std::string>> sequences;

    std::size_t event_count() const;
    bool empty() const { return sequences.empty(); }
};

struct ResourceView : SequenceView {};
struct CaseView : SequenceView {};

struct XesOptions {
    /// Activity label = values of these event attributes joined by
    /// `activity_separator`. BPIC 2013 needs {"concept:name", "lifecycle:transition"}.
    std::vector<std::string> activity_keys{"concept:name"};
    std::string activity_separator = "+";
    std::string resource_key = "org:resource";
    std::string timestamp_key = "time:timestamp";
    std::string case_key = "concept:name";
};

struct CsvMapping {
    std::string case_column = "case";
    std::string activity_column = "activity";
    std::string resource_column = "resource";
    std::string timestamp_column = "timestamp";
    std::string timestamp_format{kIsoFormat};
    char delimiter = ',';
};

/// Returns the bytes unchanged unless they start with the gzip magic, in
/// which case they are inflated. Throws ParseError on a corrupt stream.
std::string maybe_decompress(std::string bytes);

std::string read_file_bytes(const std::filesystem::path& path);

EventLog parse_xes(std::string_view bytes, const XesOptions& options = {});
EventLog parse_xes(std::istream& in, const XesOptions& options = {});
EventLog parse_csv(std::string_view bytes, const CsvMapping& mapping = {});
EventLog parse_csv(std::istream& in, const CsvMapping& mapping = {});

/// Reads and (if needed) decompresses the file, then dispatches on `format`
/// ("xes" or "csv"). Throws ConfigError for an unknown format.
EventLog load_event_log(const std::filesystem::path& path, std::string_view format, const XesOptions& xes = {},
                        const CsvMapping& csv = {});

/// Groups events by resource, each sequence ordered by (timestamp, file_order).
/// Throws EmptyLogError for an empty log.
ResourceView resource_view(const EventLog& log);
CaseView case_view(const EventLog& log);

/// Canonical text form, one line per event; equal logs give equal strings.
std::string serialize(const EventLog& log);

}  // namespace rcpm
