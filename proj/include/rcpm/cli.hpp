#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rcpm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCellFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point of the `rcpm` tool; `args` excludes the program name.
///
///   rcpm <profile|grid|run|report> --config FILE [--dataset ID] [--seed N]
///        [--out DIR] [--workers N] [--quiet]
///
/// Returns 0 on success, 1 if a run had failed cells or hit a runtime error,
/// 2 on configuration or input errors (including a log too small for every
/// candidate prefix length).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rcpm
