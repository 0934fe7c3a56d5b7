#pragma once

#include <json.hpp>

#include "rcpm/learners.hpp"

namespace rcpm {

// Model JSON layout:
//   {"kind": "forest", "label_space": [0, 2], "seed": 7, "n_features": 3,
//    "majority_label": 0, "learning_rate": 0.0, "rounds": 0, "base_scores": [],
//    "trees": [{"nodes": [{"feature": 1, "threshold": 0.5, "left": 1, "right": 2},
//                         {"value": [3, 0]}, {"value": [0, 4]}]}]}
// Leaves omit feature/threshold/children; internal nodes omit value.

nlohmann::json model_to_json(const TrainedClassifier& model);
/// Throws ConfigError on a structurally invalid document.
TrainedClassifier model_from_json(const nlohmann::json& doc);

/// Booleans stay booleans, integers stay integers, reals stay reals; key order is kept.
nlohmann::ordered_json params_to_json(const ParamAssignment& params);
ParamAssignment params_from_json(const nlohmann::ordered_json& doc);

/// Reads `{"name": [values...], ...}` preserving key order of the document.
/// `null` entries map to the unlimited-depth sentinel.
HyperGrid grid_from_json(const nlohmann::ordered_json& doc);

}  // namespace rcpm
