#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "rcpm/error.hpp"

namespace rcpm {

/// Optional wall-clock limit polled by long-running training loops.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    Deadline() = default;
    explicit Deadline(std::chrono::duration<double> budget)
        : at_(Clock::now() + std::chrono::duration_cast<Clock::duration>(budget)), budget_(budget.count()) {}

    static Deadline none() { return {}; }

    bool expired() const { return at_ && Clock::now() >= *at_; }

    /// Throws TimeoutError once the budget is spent.
    void check() const {
        if (expired()) throw TimeoutError("time budget of " + std::to_string(budget_) + " s exceeded");
    }

private:
    std::optional<Clock::time_point> at_;
    double budget_ = 0.0;
};

}  // namespace rcpm
