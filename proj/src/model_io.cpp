#include "rcpm/model_io.hpp"

#include "rcpm/error.hpp"

namespace rcpm {
namespace {

using nlohmann::json;

json value_to_json(const ParamValue& v) {
    if (auto b = std::get_if<bool>(&v)) return *b;
    if (auto i = std::get_if<std::int64_t>(&v)) return *i;
    return std::get<double>(v);
}

template <class Json>
ParamValue value_from_json(const Json& j, const std::string& key) {
    if (j.is_boolean()) return j.template get<bool>();
    if (j.is_number_integer()) return j.template get<std::int64_t>();
    if (j.is_number_float()) return j.template get<double>();
    if (j.is_null()) return std::int64_t{kUnlimitedDepth};
    throw ConfigError("hyperparameter '" + key + "' has a non-scalar value");
}

}  // namespace

json model_to_json(const TrainedClassifier& model) {
    json trees = json::array();
    for (const auto& tree : model.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) {
            if (n.is_leaf())
                nodes.push_back({{"value", n.value}});
            else
                nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
        }
        trees.push_back({{"nodes", std::move(nodes)}});
    }
    return {{"kind", std::string(to_string(model.kind))},
            {"label_space", model.label_space},
            {"seed", model.seed},
            {"n_features", model.n_features},
            {"majority_label", model.majority_label},
            {"learning_rate", model.learning_rate},
            {"rounds", model.rounds},
            {"base_scores", model.base_scores},
            {"trees", std::move(trees)}};
}

TrainedClassifier model_from_json(const json& doc) {
    try {
        TrainedClassifier m;
        m.kind = parse_model_kind(doc.at("kind").get<std::string>());
        m.label_space = doc.at("label_space").get<std::vector<int>>();
        m.seed = doc.at("seed").get<std::uint64_t>();
        m.n_features = doc.at("n_features").get<std::size_t>();
        m.majority_label = doc.at("majority_label").get<int>();
        m.learning_rate = doc.at("learning_rate").get<double>();
        m.rounds = doc.at("rounds").get<std::size_t>();
        m.base_scores = doc.at("base_scores").get<std::vector<double>>();
        for (const auto& t : doc.at("trees")) {
            Tree tree;
            for (const auto& n : t.at("nodes")) {
                TreeNode node;
                if (n.contains("value")) {
                    node.value = n.at("value").get<std::vector<double>>();
                } else {
                    node.feature = n.at("feature").get<int>();
                    node.threshold = n.at("threshold").get<double>();
                    node.left = n.at("left").get<int>();
                    node.right = n.at("right").get<int>();
                }
                tree.nodes.push_back(std::move(node));
            }
            const auto size = static_cast<int>(tree.nodes.size());
            for (const auto& node : tree.nodes)
                if (!node.is_leaf() && (node.left <= 0 || node.right <= 0 || node.left >= size || node.right >= size))
                    throw ConfigError("tree node has out-of-range children");
            m.trees.push_back(std::move(tree));
        }
        return m;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid model JSON: ") + e.what());
    }
}

nlohmann::ordered_json params_to_json(const ParamAssignment& params) {
    auto out = nlohmann::ordered_json::object();
    for (const auto& [key, v] : params) out[key] = nlohmann::ordered_json(value_to_json(v));
    return out;
}

ParamAssignment params_from_json(const nlohmann::ordered_json& doc) {
    ParamAssignment out;
    if (!doc.is_object()) throw ConfigError("hyperparameters must be a JSON object");
    for (const auto& [key, v] : doc.items()) out.emplace_back(key, value_from_json(v, key));
    return out;
}

HyperGrid grid_from_json(const nlohmann::ordered_json& doc) {
    if (!doc.is_object()) throw ConfigError("hyperparameter grid must be a JSON object");
    HyperGrid grid;
    for (const auto& [key, values] : doc.items()) {
        std::vector<ParamValue> candidates;
        if (values.is_array()) {
            for (const auto& v : values) candidates.push_back(value_from_json(v, key));
        } else {
            candidates.push_back(value_from_json(values, key));
        }
        if (candidates.empty()) throw ConfigError("hyperparameter '" + key + "' has no candidate values");
        grid.axes.emplace_back(key, std::move(candidates));
    }
    return grid;
}

}  // namespace rcpm
