#include <doctest.h>

#include "properties.hpp"

TEST_CASE("randomized invariants") {
    for (const auto& o : props::all(1000, 2024)) {
        INFO(o.name << ": " << o.first_failure);
        CHECK(o.cases == 1000);
        CHECK(o.failures == 0);
    }
}

TEST_CASE("tree root split oracle") {
    auto o = props::tree_root_oracle(2000, 99);
    INFO(o.first_failure);
    CHECK(o.failures == 0);
}
