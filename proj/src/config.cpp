#include "rcpm/config.hpp"

#include <set>

#include <json.hpp>

#include "rcpm/error.hpp"
#include "rcpm/model_io.hpp"

namespace rcpm {
namespace {

using ojson = nlohmann::ordered_json;

const std::set<std::string> kTopKeys{"datasets", "experiment", "output_dir", "seed", "workers", "verbosity"};
const std::set<std::string> kDatasetKeys{"id",  "path",           "format",        "csv", "xes", "prefix_lengths",
                                         "case_prefix_lengths", "min_resources"};
const std::set<std::string> kExperimentKeys{"min_resources", "encodings",          "models", "split_ratio",
                                            "cv_folds",      "mi_k",               "grids",  "formats",
                                            "prefix_lengths", "cell_timeout_seconds"};

void reject_unknown(const ojson& obj, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

std::vector<std::size_t> lengths_from(const ojson& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + " must be an array of positive integers");
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() <= 0)
            throw ConfigError(where + " must contain positive integers");
        auto n = v.get<std::size_t>();
        if (!out.empty() && n <= out.back()) throw ConfigError(where + " must be strictly ascending");
        out.push_back(n);
    }
    return out;
}

template <class T>
T get(const ojson& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("'" + std::string(key) + "' in " + where + " is missing or has the wrong type");
    }
}

CsvMapping csv_mapping(const ojson& j) {
    CsvMapping m;
    const std::string where = "csv mapping";
    reject_unknown(j, {"case", "activity", "resource", "timestamp", "timestamp_format", "delimiter"}, where);
    if (j.contains("case")) m.case_column = get<std::string>(j, "case", where);
    if (j.contains("activity")) m.activity_column = get<std::string>(j, "activity", where);
    if (j.contains("resource")) m.resource_column = get<std::string>(j, "resource", where);
    if (j.contains("timestamp")) m.timestamp_column = get<std::string>(j, "timestamp", where);
    if (j.contains("timestamp_format")) m.timestamp_format = get<std::string>(j, "timestamp_format", where);
    if (j.contains("delimiter")) {
        auto d = get<std::string>(j, "delimiter", where);
        if (d.size() != 1) throw ConfigError("csv delimiter must be a single character");
        m.delimiter = d[0];
    }
    return m;
}

XesOptions xes_options(const ojson& j) {
    XesOptions o;
    const std::string where = "xes options";
    reject_unknown(j, {"activity_keys", "activity_separator", "resource_key", "timestamp_key", "case_key"}, where);
    if (j.contains("activity_keys")) o.activity_keys = get<std::vector<std::string>>(j, "activity_keys", where);
    if (o.activity_keys.empty()) throw ConfigError("xes activity_keys must not be empty");
    if (j.contains("activity_separator")) o.activity_separator = get<std::string>(j, "activity_separator", where);
    if (j.contains("resource_key")) o.resource_key = get<std::string>(j, "resource_key", where);
    if (j.contains("timestamp_key")) o.timestamp_key = get<std::string>(j, "timestamp_key", where);
    if (j.contains("case_key")) o.case_key = get<std::string>(j, "case_key", where);
    return o;
}

}  // namespace

const DatasetEntry& CliConfig::dataset(const std::string& id) const {
    for (const auto& d : datasets)
        if (d.id == id) return d;
    throw ConfigError("no dataset with id '" + id + "' in the configuration");
}

ExperimentConfig CliConfig::experiment_for(const DatasetEntry& d) const {
    ExperimentConfig cfg = experiment;
    cfg.dataset_id = d.id;
    if (d.prefix_lengths) cfg.candidate_lengths = *d.prefix_lengths;
    if (d.min_resources) cfg.min_resources = *d.min_resources;
    return cfg;
}

CliConfig parse_cli_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    ojson doc;
    try {
        doc = ojson::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    reject_unknown(doc, kTopKeys, "configuration");

    CliConfig cfg;
    if (doc.contains("output_dir")) cfg.output_dir = base_dir / get<std::string>(doc, "output_dir", "configuration");
    else cfg.output_dir = base_dir / "out";
    if (doc.contains("seed")) cfg.experiment.seed = get<std::uint64_t>(doc, "seed", "configuration");
    if (doc.contains("workers")) cfg.experiment.workers = get<std::size_t>(doc, "workers", "configuration");
    if (doc.contains("verbosity")) cfg.verbosity = get<int>(doc, "verbosity", "configuration");

    if (!doc.contains("datasets") || !doc["datasets"].is_array() || doc["datasets"].empty())
        throw ConfigError("configuration needs a non-empty 'datasets' array");
    std::set<std::string> ids;
    for (const auto& j : doc["datasets"]) {
        reject_unknown(j, kDatasetKeys, "dataset entry");
        DatasetEntry d;
        d.id = get<std::string>(j, "id", "dataset entry");
        if (!ids.insert(d.id).second) throw ConfigError("duplicate dataset id '" + d.id + "'");
        const std::string where = "dataset '" + d.id + "'";
        d.path = base_dir / get<std::string>(j, "path", where);
        if (j.contains("format")) d.format = get<std::string>(j, "format", where);
        if (d.format != "xes" && d.format != "csv") throw ConfigError(where + ": format must be 'xes' or 'csv'");
        if (j.contains("csv")) d.csv = csv_mapping(j["csv"]);
        if (j.contains("xes")) d.xes = xes_options(j["xes"]);
        if (j.contains("prefix_lengths")) d.prefix_lengths = lengths_from(j["prefix_lengths"], where + " prefix_lengths");
        if (j.contains("case_prefix_lengths"))
            d.case_prefix_lengths = lengths_from(j["case_prefix_lengths"], where + " case_prefix_lengths");
        if (j.contains("min_resources")) d.min_resources = get<std::size_t>(j, "min_resources", where);
        cfg.datasets.push_back(std::move(d));
    }

    if (doc.contains("experiment")) {
        const auto& e = doc["experiment"];
        const std::string where = "experiment";
        reject_unknown(e, kExperimentKeys, where);
        auto& x = cfg.experiment;
        if (e.contains("min_resources")) x.min_resources = get<std::size_t>(e, "min_resources", where);
        if (e.contains("prefix_lengths")) x.candidate_lengths = lengths_from(e["prefix_lengths"], "experiment prefix_lengths");
        if (e.contains("encodings")) {
            x.encodings.clear();
            for (const auto& name : get<std::vector<std::string>>(e, "encodings", where))
                x.encodings.push_back(parse_encoding(name));
        }
        if (e.contains("models")) {
            x.models.clear();
            for (const auto& name : get<std::vector<std::string>>(e, "models", where))
                x.models.push_back(parse_model_kind(name));
        }
        if (e.contains("split_ratio")) x.split_ratio = get<double>(e, "split_ratio", where);
        if (e.contains("cv_folds")) x.cv_folds = get<std::size_t>(e, "cv_folds", where);
        if (e.contains("mi_k")) x.mi_k = get<std::size_t>(e, "mi_k", where);
        if (e.contains("cell_timeout_seconds")) x.cell_timeout_seconds = get<double>(e, "cell_timeout_seconds", where);
        if (e.contains("grids")) {
            for (const auto& [name, grid] : e["grids"].items()) x.grids[parse_model_kind(name)] = grid_from_json(grid);
        }
        if (e.contains("formats")) {
            cfg.formats.clear();
            for (const auto& f : get<std::vector<std::string>>(e, "formats", where)) {
                if (f == "csv") cfg.formats.push_back(ReportFormat::Csv);
                else if (f == "json") cfg.formats.push_back(ReportFormat::Json);
                else throw ConfigError("unknown output format '" + f + "'");
            }
        }
    }
    cfg.experiment.validate();
    return cfg;
}

CliConfig load_cli_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("configuration file '" + path.string() + "' does not exist");
    return parse_cli_config(read_file_bytes(path), path.parent_path());
}

}  // namespace rcpm
