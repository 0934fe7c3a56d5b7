#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rcpm/log_model.hpp"

namespace rcpm {

/// Bijection between activity labels and dense integer ids. Ids of fitted
/// labels follow lexicographic order; labels added later get the next id.
class LabelEncoder {
public:
    LabelEncoder() = default;
    explicit LabelEncoder(std::vector<std::string> labels);

    int encode(const std::string& label) const;
    const std::string& decode(int id) const;
    bool contains(const std::string& label) const { return forward_.count(label) != 0; }
    std::size_t size() const { return backward_.size(); }
    const std::vector<std::string>& labels() const { return backward_; }

    /// Returns the id of `label`, appending it first if absent.
    int add(const std::string& label);

    std::vector<int> encode(std::span<const std::string> labels) const;
    std::vector<std::string> decode(std::span<const int> ids) const;

    friend bool operator==(const LabelEncoder& a, const LabelEncoder& b) { return a.backward_ == b.backward_; }

private:
    std::map<std::string, int> forward_;
    std::vector<std::string> backward_;
};

struct PrefixSample {
    std::string resource_id;
    std::vector<int> prefix;
    int target = 0;

    friend bool operator==(const PrefixSample&, const PrefixSample&) = default;
};

struct PrefixDataset {
    std::size_t prefix_length = 0;
    std::vector<PrefixSample> samples;
    LabelEncoder encoder;

    std::vector<int> targets() const;

    friend bool operator==(const PrefixDataset&, const PrefixDataset&) = default;
};

LabelEncoder fit_label_encoder(const EventLog& log);

/// Keys whose sequence holds at least `length + 1` activities, in key order.
std::vector<std::string> eligible_resources(const SequenceView& view, std::size_t length);

/// One sample per eligible key: the first `length` activities and the one after.
/// Throws DataError when no key is eligible.
PrefixDataset build_prefix_dataset(const SequenceView& view, std::size_t length, const LabelEncoder& encoder);

/// Longest head of the ascending `candidate_lengths` whose every length keeps at
/// least `min_resources` eligible keys. Throws ConfigError if the candidates are
/// not strictly ascending positive integers.
std::vector<std::size_t> prefix_grid(const SequenceView& view, std::span<const std::size_t> candidate_lengths,
                                     std::size_t min_resources = 100);

inline const std::vector<std::size_t>& default_prefix_candidates() {
    static const std::vector<std::size_t> grid{5, 10, 20, 50, 100, 200, 500, 1000, 1500, 2000, 3000};
    return grid;
}

/// Writes `resource_id,a_1..a_L,target` with encoded ids.
void write_prefix_csv(std::ostream& out, const PrefixDataset& ds);

}  // namespace rcpm
