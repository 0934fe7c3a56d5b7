#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rcpm/error.hpp"
#include "rcpm/profiler.hpp"

using namespace rcpm;
using Seq = std::vector<std::string>;

namespace {

SequenceView view(std::map<std::string, Seq> s) {
    SequenceView v;
    v.sequences = std::move(s);
    return v;
}

}  // namespace

TEST_CASE("variant_ratio") {
    CHECK(variant_ratio(view({{"r1", {"A"}}, {"r2", {"B"}}, {"r3", {"A", "B"}}})) == doctest::Approx(1.0));
    CHECK(variant_ratio(view({{"r1", {"A", "B", "C"}}, {"r2", {"A", "B", "C"}}})) == doctest::Approx(0.5));
}

TEST_CASE("avg_sequence_length") {
    CHECK(avg_sequence_length(view({{"r1", {"A", "B"}}, {"r2", {"C", "D", "E", "F"}}})) == doctest::Approx(3.0));
    CHECK(avg_sequence_length(view({{"r1", {"A", "B", "C", "D", "E"}}})) == doctest::Approx(5.0));
}

TEST_CASE("specialization") {
    CHECK(specialization(Seq{"A", "A", "A"}, 4) == doctest::Approx(1.0));
    CHECK(specialization(Seq{"A", "B", "C", "D"}, 4) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(specialization(Seq{"A", "A", "B", "B"}, 4) == doctest::Approx(0.5));
    CHECK(specialization(Seq{"A"}, 1) == doctest::Approx(1.0));
    for (std::size_t alphabet : {2, 3, 10}) CHECK(specialization(Seq{"A", "A"}, alphabet) == doctest::Approx(1.0));
    Seq mixed{"A", "B", "B", "C", "C", "C"};
    CHECK(specialization(mixed, 5) == doctest::Approx(oracle::specialization(mixed, 5)));
}

TEST_CASE("avg_specialization") {
    CHECK(avg_specialization(view({{"r1", {"A", "A"}}, {"r2", {"A", "B"}}}), 2) == doctest::Approx(0.5));
}

TEST_CASE("repetition") {
    CHECK(repetition(Seq{"A", "B", "C"}) == doctest::Approx(0.0));
    CHECK(repetition(Seq{"A", "A", "A"}) == doctest::Approx(2.0));
    CHECK(repetition(Seq{"A", "A", "B", "B", "B"}) == doctest::Approx(1.5));
    CHECK(avg_repetition(view({{"r1", {"A", "B", "C"}}, {"r2", {"A", "A", "A"}}})) == doctest::Approx(1.0));
    CHECK(avg_repetition(view({{"r1", {"A"}}, {"r2", {"B"}}})) == doctest::Approx(0.0));
}

TEST_CASE("majority_class_accuracy") {
    using S = std::string;
    std::vector<S> train{"X", "X", "Y"};
    std::vector<S> test{"X", "Y"};
    CHECK(majority_class_accuracy<S>(train, test) == doctest::Approx(0.5));
    std::vector<S> all_x{"X", "X"};
    CHECK(majority_class_accuracy<S>(train, all_x) == doctest::Approx(1.0));
    std::vector<S> tie{"Y", "X"};
    std::vector<S> only_x{"X"};
    CHECK(majority_class_accuracy<S>(tie, only_x) == doctest::Approx(1.0));
    CHECK_THROWS_AS(majority_class_accuracy<S>({}, only_x), DataError);
}

TEST_CASE("example_leakage") {
    using P = Seq;
    std::vector<P> train{{"A", "B"}, {"B", "C"}};
    std::vector<P> test{{"A", "B"}, {"C", "D"}};
    auto r = example_leakage<P>(train, test);
    CHECK(r.leaked_fraction == doctest::Approx(0.5));
    CHECK(r.n_leaked == 1);
    CHECK(r.prefix_length == 2);
    std::vector<P> disjoint{{"X", "Y"}};
    CHECK(example_leakage<P>(train, disjoint).leaked_fraction == doctest::Approx(0.0));
    CHECK(example_leakage<P>(train, train).leaked_fraction == doctest::Approx(1.0));
    std::vector<P> uneven{{"A"}};
    CHECK_THROWS_AS(example_leakage<P>(train, uneven), DataError);
}

TEST_CASE("profile of the fixture log") {
    auto log = load_event_log(std::string(RCPM_FIXTURES) + "/tiny.csv", "csv");
    auto p = profile(log);
    CHECK(p.n_events == 80);
    CHECK(p.n_resources == 12);
    CHECK(p.n_activities == 4);
    CHECK(p.n_cases == 6);
    CHECK(p.n_dropped_events == 1);
    CHECK(p.avg_seq_len_per_resource == doctest::Approx(80.0 / 12.0));
    auto rv = resource_view(log);
    double spec = 0.0;
    double rep = 0.0;
    for (const auto& [k, s] : rv.sequences) {
        spec += oracle::specialization(s, 4);
        rep += oracle::repetition(s);
    }
    CHECK(p.avg_specialization == doctest::Approx(spec / 12.0));
    CHECK(p.avg_repetition == doctest::Approx(rep / 12.0));
    CHECK(p.variant_resource_ratio == doctest::Approx(oracle::variant_ratio(rv.sequences)));
    CHECK(p.variant_case_ratio == doctest::Approx(oracle::variant_ratio(case_view(log).sequences)));
}

TEST_CASE("majority_baseline rows follow the admissible grid") {
    auto log = load_event_log(std::string(RCPM_FIXTURES) + "/tiny.csv", "csv");
    std::vector<std::size_t> lengths{3, 5, 6, 8};
    auto rows = majority_baseline(resource_view(log), log, lengths, 6, 0.8, 1);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].prefix_length == 3);
    CHECK(rows[2].prefix_length == 6);
    for (const auto& r : rows) {
        CHECK(r.majority_accuracy >= 0.0);
        CHECK(r.majority_accuracy <= 1.0);
    }
    CHECK(rows == majority_baseline(resource_view(log), log, lengths, 6, 0.8, 1));
}
