#include "rcpm/log_model.hpp"

#include <expat.h>
#include <zlib.h>

#include <algorithm>
#include <climits>
#include <fstream>
#include <iterator>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "rcpm/csv.hpp"
#include "rcpm/error.hpp"

namespace rcpm {

EventLog EventLog::from_events(std::vector<Event> events, std::size_t dropped_event_count) {
    if (events.empty()) throw EmptyLogError("event log contains no events with a resource");
    std::set<std::string> activities;
    std::set<std::string> resources;
    std::set<std::string> cases;
    std::set<std::size_t> orders;
    for (const auto& e : events) {
        if (e.activity.empty()) throw ValidationError("event at position " + std::to_string(e.file_order) + " has an empty activity");
        if (!orders.insert(e.file_order).second)
            throw ValidationError("duplicate file_order " + std::to_string(e.file_order));
        activities.insert(e.activity);
        resources.insert(e.resource);
        cases.insert(e.case_id);
    }
    EventLog log;
    log.events = std::move(events);
    log.activity_alphabet.assign(activities.begin(), activities.end());
    log.resource_set.assign(resources.begin(), resources.end());
    log.case_set.assign(cases.begin(), cases.end());
    log.dropped_event_count = dropped_event_count;
    return log;
}

std::size_t SequenceView::event_count() const {
    std::size_t n = 0;
    for (const auto& [key, seq] : sequences) n += seq.size();
    return n;
}

std::string maybe_decompress(std::string bytes) {
    if (bytes.size() < 2 || static_cast<unsigned char>(bytes[0]) != 0x1f || static_cast<unsigned char>(bytes[1]) != 0x8b)
        return bytes;

    if (bytes.size() > UINT_MAX) throw ParseError("gzip input larger than 4 GiB is not supported", 0, 0);
    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw ParseError("cannot initialise gzip decoder", 0, 0);
    zs.next_in = reinterpret_cast<Bytef*>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    std::string out;
    std::string chunk(1 << 16, '\0');
    for (;;) {
        zs.next_out = reinterpret_cast<Bytef*>(chunk.data());
        zs.avail_out = static_cast<uInt>(chunk.size());
        int rc = inflate(&zs, Z_NO_FLUSH);
        out.append(chunk.data(), chunk.size() - zs.avail_out);
        if (rc == Z_STREAM_END) {
            if (zs.avail_in == 0) break;
            inflateReset(&zs);  // concatenated gzip members
            continue;
        }
        if (rc != Z_OK) {
            std::size_t at = bytes.size() - zs.avail_in;
            inflateEnd(&zs);
            throw ParseError(rc == Z_BUF_ERROR ? "truncated gzip stream" : "corrupt gzip stream", 0, at);
        }
    }
    inflateEnd(&zs);
    return out;
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file '" + path.string() + "'");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

namespace {

std::string slurp(std::istream& in) {
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

class XesHandler {
public:
    explicit XesHandler(const XesOptions& o) : opts_(o) {}

    static void on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
        static_cast<XesHandler*>(self)->start(name, attrs);
    }
    static void on_end(void* self, const XML_Char* name) { static_cast<XesHandler*>(self)->end(name); }

    void start(std::string_view name, const XML_Char** attrs) {
        ++depth_;
        if (skip_depth_) return;
        if (name == "global" || name == "extension" || name == "classifier") {
            skip_depth_ = depth_;
            return;
        }
        if (name == "trace" && !trace_depth_) {
            trace_depth_ = depth_;
            ++trace_count_;
            case_id_.reset();
            pending_.clear();
            return;
        }
        if (name == "event" && trace_depth_ && !event_depth_) {
            event_depth_ = depth_;
            attributes_.clear();
            return;
        }
        const char* key = nullptr;
        const char* value = nullptr;
        for (int i = 0; attrs[i]; i += 2) {
            std::string_view a = attrs[i];
            if (a == "key")
                key = attrs[i + 1];
            else if (a == "value")
                value = attrs[i + 1];
        }
        if (!key || !value) return;
        if (event_depth_ && depth_ == event_depth_ + 1) {
            attributes_.emplace(key, value);
        } else if (trace_depth_ && !event_depth_ && depth_ == trace_depth_ + 1 && opts_.case_key == key) {
            case_id_ = value;
        }
    }

    void end(std::string_view name) {
        if (skip_depth_) {
            if (depth_ == skip_depth_) skip_depth_ = 0;
            --depth_;
            return;
        }
        if (event_depth_ && depth_ == event_depth_ && name == "event") {
            finish_event();
            event_depth_ = 0;
        } else if (trace_depth_ && depth_ == trace_depth_ && name == "trace") {
            finish_trace();
            trace_depth_ = 0;
        }
        --depth_;
    }

    std::vector<Event> take_events() { return std::move(events_); }
    std::size_t dropped() const { return dropped_; }
    std::size_t trace_count() const { return trace_count_; }
    const std::vector<std::string>& problems() const { return problems_; }

private:
    struct Pending {
        std::string activity;
        std::optional<std::string> resource;
        std::optional<Timestamp> timestamp;
        std::string raw_timestamp;
        bool has_timestamp = false;
        bool has_activity = false;
        std::size_t order;
    };

    void finish_event() {
        Pending p;
        p.order = next_order_++;
        p.has_activity = true;
        for (std::size_t i = 0; i < opts_.activity_keys.size(); ++i) {
            auto it = attributes_.find(opts_.activity_keys[i]);
            if (it == attributes_.end()) {
                p.has_activity = false;
                break;
            }
            if (i) p.activity += opts_.activity_separator;
            p.activity += it->second;
        }
        if (auto it = attributes_.find(opts_.resource_key); it != attributes_.end() && !it->second.empty())
            p.resource = it->second;
        if (auto it = attributes_.find(opts_.timestamp_key); it != attributes_.end()) {
            p.has_timestamp = true;
            p.raw_timestamp = it->second;
            p.timestamp = parse_iso8601(it->second);
        }
        pending_.push_back(std::move(p));
    }

    void finish_trace() {
        std::string label = case_id_ ? "'" + *case_id_ + "'" : "#" + std::to_string(trace_count_);
        for (std::size_t i = 0; i < pending_.size(); ++i) {
            auto& p = pending_[i];
            std::string where = "trace " + label + ", event " + std::to_string(i + 1);
            if (!p.has_timestamp) {
                problems_.push_back(where + ": missing '" + opts_.timestamp_key + "'");
                continue;
            }
            if (!p.timestamp) {
                problems_.push_back(where + ": unparseable timestamp '" + p.raw_timestamp + "'");
                continue;
            }
            if (!p.has_activity || p.activity.empty()) {
                problems_.push_back(where + ": missing activity");
                continue;
            }
            if (!case_id_) {
                problems_.push_back("trace " + label + ": missing '" + opts_.case_key + "'");
                break;
            }
            if (!p.resource) {
                ++dropped_;
                continue;
            }
            events_.push_back(Event{*case_id_, std::move(p.activity), std::move(*p.resource), *p.timestamp, p.order});
        }
        pending_.clear();
    }

    const XesOptions& opts_;
    int depth_ = 0;
    int skip_depth_ = 0;
    int trace_depth_ = 0;
    int event_depth_ = 0;
    std::size_t trace_count_ = 0;
    std::size_t next_order_ = 0;
    std::size_t dropped_ = 0;
    std::optional<std::string> case_id_;
    std::unordered_map<std::string, std::string> attributes_;
    std::vector<Pending> pending_;
    std::vector<Event> events_;
    std::vector<std::string> problems_;
};

[[noreturn]] void throw_problems(const std::vector<std::string>& problems) {
    std::string msg = "invalid event log: ";
    constexpr std::size_t kShown = 10;
    for (std::size_t i = 0; i < problems.size() && i < kShown; ++i) {
        if (i) msg += "; ";
        msg += problems[i];
    }
    if (problems.size() > kShown) msg += "; ... (" + std::to_string(problems.size() - kShown) + " more)";
    throw ValidationError(msg);
}

std::vector<std::size_t> chronological_order(const EventLog& log) {
    std::vector<std::size_t> idx(log.events.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = log.events[a];
        const auto& eb = log.events[b];
        if (ea.timestamp != eb.timestamp) return ea.timestamp < eb.timestamp;
        return ea.file_order < eb.file_order;
    });
    return idx;
}

template <class View, class KeyOf>
View group_by(const EventLog& log, KeyOf key_of) {
    if (log.events.empty()) throw EmptyLogError("cannot build a view of an empty log");
    View view;
    for (std::size_t i : chronological_order(log)) {
        const auto& e = log.events[i];
        view.sequences[key_of(e)].push_back(e.activity);
    }
    return view;
}

}  // namespace

EventLog parse_xes(std::string_view bytes, const XesOptions& options) {
    if (options.activity_keys.empty()) throw ConfigError("XES options need at least one activity key");
    XesHandler handler(options);
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"), &XML_ParserFree);
    if (!parser) throw Error("cannot allocate XML parser");
    XML_SetUserData(parser.get(), &handler);
    XML_SetElementHandler(parser.get(), &XesHandler::on_start, &XesHandler::on_end);

    constexpr std::size_t kChunk = std::size_t{1} << 30;
    std::size_t offset = 0;
    do {
        std::size_t len = std::min(kChunk, bytes.size() - offset);
        bool last = offset + len == bytes.size();
        if (XML_Parse(parser.get(), bytes.data() + offset, static_cast<int>(len), last) == XML_STATUS_ERROR) {
            throw ParseError(std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())),
                             XML_GetCurrentLineNumber(parser.get()), XML_GetCurrentColumnNumber(parser.get()) + 1);
        }
        offset += len;
    } while (offset < bytes.size());

    if (!handler.problems().empty()) throw_problems(handler.problems());
    if (handler.trace_count() == 0) throw EmptyLogError("XES document contains no traces");
    return EventLog::from_events(handler.take_events(), handler.dropped());
}

EventLog parse_xes(std::istream& in, const XesOptions& options) {
    return parse_xes(maybe_decompress(slurp(in)), options);
}

EventLog parse_csv(std::string_view bytes, const CsvMapping& mapping) {
    auto rows = csv::parse(bytes, mapping.delimiter);
    if (rows.empty()) throw EmptyLogError("CSV input has no header row");
    const auto& header = rows.front();
    auto column = [&](const std::string& name, const char* role) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ConfigError(std::string("CSV has no ") + role + " column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    std::size_t c_case = column(mapping.case_column, "case");
    std::size_t c_act = column(mapping.activity_column, "activity");
    std::size_t c_res = column(mapping.resource_column, "resource");
    std::size_t c_ts = column(mapping.timestamp_column, "timestamp");
    std::size_t needed = std::max({c_case, c_act, c_res, c_ts}) + 1;

    std::vector<Event> events;
    std::size_t dropped = 0;
    std::size_t data_row = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;
        std::size_t order = data_row++;
        std::string where = "row " + std::to_string(order + 1);
        if (row.size() < needed) throw ValidationError(where + ": expected at least " + std::to_string(needed) + " fields");
        auto ts = parse_timestamp(row[c_ts], mapping.timestamp_format);
        if (!ts)
            throw ValidationError(where + ": cannot parse timestamp '" + row[c_ts] + "' with format '" +
                                  mapping.timestamp_format + "'");
        if (row[c_act].empty()) throw ValidationError(where + ": empty activity");
        if (row[c_res].empty()) {
            ++dropped;
            continue;
        }
        events.push_back(Event{row[c_case], row[c_act], row[c_res], *ts, order});
    }
    if (data_row == 0) throw EmptyLogError("CSV input has no data rows");
    return EventLog::from_events(std::move(events), dropped);
}

EventLog parse_csv(std::istream& in, const CsvMapping& mapping) {
    return parse_csv(maybe_decompress(slurp(in)), mapping);
}

EventLog load_event_log(const std::filesystem::path& path, std::string_view format, const XesOptions& xes,
                        const CsvMapping& csv) {
    if (format != "xes" && format != "csv") throw ConfigError("unknown log format '" + std::string(format) + "'");
    if (!std::filesystem::exists(path)) throw ConfigError("input file '" + path.string() + "' does not exist");
    auto bytes = maybe_decompress(read_file_bytes(path));
    return format == "xes" ? parse_xes(bytes, xes) : parse_csv(bytes, csv);
}

ResourceView resource_view(const EventLog& log) {
    return group_by<ResourceView>(log, [](const Event& e) -> const std::string& { return e.resource; });
}

CaseView case_view(const EventLog& log) {
    return group_by<CaseView>(log, [](const Event& e) -> const std::string& { return e.case_id; });
}

std::string serialize(const EventLog& log) {
    std::ostringstream out;
    out << "dropped=" << log.dropped_event_count << '\n';
    for (const auto& e : log.events) {
        csv::write_row(out, {std::to_string(e.file_order), e.case_id, e.activity, e.resource, format_iso8601(e.timestamp)});
    }
    return out.str();
}

}  // namespace rcpm
