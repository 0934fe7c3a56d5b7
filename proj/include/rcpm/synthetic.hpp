#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rcpm/log_model.hpp"

namespace rcpm {

/// Log in which every resource repeats its current activity `k` times before
/// moving to the next activity of `cycle` (k drawn once per resource from
/// `run_lengths`). The start activity and the length of the first run
/// (1..k) are drawn per resource, so the phase of a prefix varies.
struct RunLogSpec {
    std::size_t n_resources = 500;
    std::size_t min_events = 30;
    std::size_t max_events = 60;
    std::vector<std::size_t> run_lengths{2, 3, 4};
    std::vector<std::string> cycle{"A", "B", "C"};
    std::uint64_t seed = 1;
};

EventLog generate_run_structured_log(const RunLogSpec& spec);

/// Serialises a log as `case,activity,resource,timestamp` CSV (ISO-8601 timestamps).
std::string to_csv(const EventLog& log);

}  // namespace rcpm
