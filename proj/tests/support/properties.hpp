#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace props {

struct Outcome {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;
    bool ok() const { return failures == 0 && cases > 0; }
};

// Every suite draws `cases` random instances from a generator seeded with `seed`.
Outcome split_partition(std::size_t cases, std::uint64_t seed);
Outcome rare_class_rules(std::size_t cases, std::uint64_t seed);
Outcome run_feature_identity(std::size_t cases, std::uint64_t seed);
Outcome bigram_counts(std::size_t cases, std::uint64_t seed);
Outcome mutual_information_laws(std::size_t cases, std::uint64_t seed);
Outcome seeded_determinism(std::size_t cases, std::uint64_t seed);
Outcome sequence_metrics(std::size_t cases, std::uint64_t seed);
Outcome view_ordering(std::size_t cases, std::uint64_t seed);
Outcome prefix_extraction(std::size_t cases, std::uint64_t seed);
Outcome majority_accuracy(std::size_t cases, std::uint64_t seed);
Outcome constant_aggregate(std::size_t cases, std::uint64_t seed);
Outcome tree_root_oracle(std::size_t cases, std::uint64_t seed);

std::vector<Outcome> all(std::size_t cases, std::uint64_t seed);

}  // namespace props
