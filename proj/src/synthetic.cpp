#include "rcpm/synthetic.hpp"

#include <random>
#include <sstream>

#include "rcpm/csv.hpp"
#include "rcpm/error.hpp"

namespace rcpm {

EventLog generate_run_structured_log(const RunLogSpec& spec) {
    if (spec.n_resources == 0 || spec.cycle.empty() || spec.run_lengths.empty() || spec.min_events == 0 ||
        spec.min_events > spec.max_events)
        throw ConfigError("invalid synthetic log specification");
    std::mt19937_64 rng(spec.seed);
    auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    const Timestamp origin = std::chrono::sys_days{std::chrono::year{2020} / 1 / 1};
    std::vector<Event> events;
    std::size_t order = 0;
    const std::size_t width = std::to_string(spec.n_resources - 1).size();
    for (std::size_t r = 0; r < spec.n_resources; ++r) {
        std::string id = std::to_string(r);
        std::string resource = "res" + std::string(width - id.size(), '0') + id;
        std::size_t k = spec.run_lengths[uniform(0, spec.run_lengths.size() - 1)];
        std::size_t activity = uniform(0, spec.cycle.size() - 1);
        std::size_t left_in_run = uniform(1, k);
        std::size_t n_events = uniform(spec.min_events, spec.max_events);
        std::size_t run = 0;
        for (std::size_t i = 0; i < n_events; ++i) {
            if (left_in_run == 0) {
                activity = (activity + 1) % spec.cycle.size();
                left_in_run = k;
                ++run;
            }
            --left_in_run;
            Event e;
            e.case_id = resource + "-" + std::to_string(run);
            e.activity = spec.cycle[activity];
            e.resource = resource;
            e.timestamp = origin + std::chrono::minutes(static_cast<long>(i * 10 + r));
            e.file_order = order++;
            events.push_back(std::move(e));
        }
    }
    return EventLog::from_events(std::move(events));
}

std::string to_csv(const EventLog& log) {
    std::ostringstream out;
    csv::write_row(out, {"case", "activity", "resource", "timestamp"});
    for (const auto& e : log.events) csv::write_row(out, {e.case_id, e.activity, e.resource, format_iso8601(e.timestamp)});
    return out.str();
}

}  // namespace rcpm
