#include "rcpm/report_io.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <set>

#include <json.hpp>

#include "rcpm/csv.hpp"
#include "rcpm/error.hpp"
#include "rcpm/model_io.hpp"

namespace rcpm {
namespace {

using ojson = nlohmann::ordered_json;

const csv::Row kResultHeader{"dataset",          "prefix_length", "encoding",    "model",  "accuracy", "n_train",
                             "n_test",           "leakage_fraction", "cv_accuracy", "best_params", "status", "error"};

double parse_double(const std::string& s, const char* what) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ValidationError(std::string("cannot parse ") + what + " '" + s + "'");
    return v;
}

std::size_t parse_size(const std::string& s, const char* what) {
    std::size_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ValidationError(std::string("cannot parse ") + what + " '" + s + "'");
    return v;
}

ojson record_json(const ResultRecord& r) {
    ojson j;
    j["dataset"] = r.dataset;
    j["prefix_length"] = r.prefix_length;
    j["encoding"] = std::string(to_string(r.encoding));
    j["model"] = std::string(to_string(r.model));
    j["accuracy"] = r.accuracy;
    j["n_train"] = r.n_train;
    j["n_test"] = r.n_test;
    j["leakage_fraction"] = r.leakage_fraction;
    j["cv_accuracy"] = r.cv_accuracy;
    j["best_params"] = params_to_json(r.best_params);
    j["status"] = r.failed ? "failed" : "ok";
    j["error"] = r.error;
    return j;
}

ojson row_json(const AggregateRow& r) {
    ojson j;
    j["dataset"] = r.dataset;
    j["model"] = std::string(to_string(r.model));
    j["encoding"] = std::string(to_string(r.encoding));
    j["n"] = r.n;
    j["mean"] = r.mean;
    j["std"] = r.std;
    return j;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_results_csv(std::ostream& out, std::span<const ResultRecord> records) {
    csv::write_row(out, kResultHeader);
    for (const auto& r : records) {
        csv::write_row(out, {r.dataset, std::to_string(r.prefix_length), std::string(to_string(r.encoding)),
                             std::string(to_string(r.model)), format_double(r.accuracy), std::to_string(r.n_train),
                             std::to_string(r.n_test), format_double(r.leakage_fraction), format_double(r.cv_accuracy),
                             params_to_json(r.best_params).dump(), r.failed ? "failed" : "ok", r.error});
    }
}

void write_results_json(std::ostream& out, std::span<const ResultRecord> records) {
    ojson doc;
    doc["schema"] = "rcpm.results/1";
    doc["records"] = ojson::array();
    for (const auto& r : records) doc["records"].push_back(record_json(r));
    out << doc.dump(2) << '\n';
}

std::vector<ResultRecord> read_results_csv(std::istream& in) {
    std::string text(std::istreambuf_iterator<char>(in), {});
    auto rows = csv::parse(text);
    if (rows.empty() || rows.front() != kResultHeader) throw ValidationError("results CSV has an unexpected header");
    std::vector<ResultRecord> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != kResultHeader.size())
            throw ValidationError("results CSV row " + std::to_string(i) + " has " + std::to_string(row.size()) + " fields");
        ResultRecord r;
        r.dataset = row[0];
        r.prefix_length = parse_size(row[1], "prefix_length");
        r.encoding = parse_encoding(row[2]);
        r.model = parse_model_kind(row[3]);
        r.accuracy = parse_double(row[4], "accuracy");
        r.n_train = parse_size(row[5], "n_train");
        r.n_test = parse_size(row[6], "n_test");
        r.leakage_fraction = parse_double(row[7], "leakage_fraction");
        r.cv_accuracy = parse_double(row[8], "cv_accuracy");
        try {
            r.best_params = params_from_json(nlohmann::ordered_json::parse(row[9]));
        } catch (const nlohmann::json::exception&) {
            throw ValidationError("results CSV row " + std::to_string(i) + ": best_params is not a JSON object");
        }
        r.failed = row[10] == "failed";
        r.error = row[11];
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ResultRecord> read_results_json(std::istream& in) {
    std::vector<ResultRecord> out;
    try {
        auto doc = nlohmann::ordered_json::parse(in);
        for (const auto& j : doc.at("records")) {
            ResultRecord r;
            r.dataset = j.at("dataset").get<std::string>();
            r.prefix_length = j.at("prefix_length").get<std::size_t>();
            r.encoding = parse_encoding(j.at("encoding").get<std::string>());
            r.model = parse_model_kind(j.at("model").get<std::string>());
            r.accuracy = j.at("accuracy").get<double>();
            r.n_train = j.at("n_train").get<std::size_t>();
            r.n_test = j.at("n_test").get<std::size_t>();
            r.leakage_fraction = j.at("leakage_fraction").get<double>();
            r.cv_accuracy = j.at("cv_accuracy").get<double>();
            r.best_params = params_from_json(j.at("best_params"));
            r.failed = j.at("status").get<std::string>() == "failed";
            r.error = j.at("error").get<std::string>();
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid results JSON: ") + e.what());
    }
    return out;
}

void write_aggregate_wide_csv(std::ostream& out, std::span<const AggregateRow> rows) {
    std::set<std::pair<ModelKind, Encoding>> columns;
    std::map<std::string, std::map<std::pair<ModelKind, Encoding>, const AggregateRow*>> by_dataset;
    for (const auto& r : rows) {
        columns.insert({r.model, r.encoding});
        by_dataset[r.dataset][{r.model, r.encoding}] = &r;
    }
    csv::Row header{"dataset"};
    for (const auto& [m, e] : columns) {
        std::string base = std::string(to_string(m)) + "/" + std::string(to_string(e));
        header.push_back(base + "/mean");
        header.push_back(base + "/std");
    }
    csv::write_row(out, header);
    for (const auto& [dataset, cells] : by_dataset) {
        csv::Row row{dataset};
        for (const auto& col : columns) {
            auto it = cells.find(col);
            row.push_back(it == cells.end() ? "" : format_double(it->second->mean));
            row.push_back(it == cells.end() ? "" : format_double(it->second->std));
        }
        csv::write_row(out, row);
    }
}

void write_aggregates_json(std::ostream& out, const AggregateTable& table) {
    ojson doc;
    doc["schema"] = "rcpm.aggregates/1";
    doc["std"] = "population";
    doc["accuracy"] = ojson::array();
    doc["improvement_vs_seqonly"] = ojson::array();
    for (const auto& r : table.accuracy) doc["accuracy"].push_back(row_json(r));
    for (const auto& r : table.improvement) doc["improvement_vs_seqonly"].push_back(row_json(r));
    out << doc.dump(2) << '\n';
}

void write_timings_csv(std::ostream& out, std::span<const ResultRecord> records) {
    csv::write_row(out, {"dataset", "prefix_length", "encoding", "model", "wall_time_seconds"});
    for (const auto& r : records)
        csv::write_row(out, {r.dataset, std::to_string(r.prefix_length), std::string(to_string(r.encoding)),
                             std::string(to_string(r.model)), format_double(r.wall_time_seconds)});
}

std::vector<std::filesystem::path> export_report(std::span<const ResultRecord> records, const AggregateTable& table,
                                                 const std::filesystem::path& dir,
                                                 std::span<const ReportFormat> formats) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto emit = [&](const char* name, auto&& writer) {
        auto path = dir / name;
        auto out = open_out(path);
        writer(out);
        written.push_back(path);
    };
    for (auto format : formats) {
        if (format == ReportFormat::Csv) {
            emit("results.csv", [&](std::ostream& o) { write_results_csv(o, records); });
            emit("accuracy_by_model.csv", [&](std::ostream& o) { write_aggregate_wide_csv(o, table.accuracy); });
            emit("improvement_vs_seqonly.csv",
                 [&](std::ostream& o) { write_aggregate_wide_csv(o, table.improvement); });
        } else {
            emit("results.json", [&](std::ostream& o) { write_results_json(o, records); });
            emit("aggregates.json", [&](std::ostream& o) { write_aggregates_json(o, table); });
        }
    }
    emit("timings.csv", [&](std::ostream& o) { write_timings_csv(o, records); });
    return written;
}

void write_profile_json(std::ostream& out, const std::string& dataset, const DatasetProfile& p) {
    ojson j;
    j["schema"] = "rcpm.profile/1";
    j["dataset"] = dataset;
    j["cases"] = p.n_cases;
    j["events"] = p.n_events;
    j["activities"] = p.n_activities;
    j["resources"] = p.n_resources;
    j["dropped_events"] = p.n_dropped_events;
    j["avg_sequence_length_per_resource"] = p.avg_seq_len_per_resource;
    j["avg_specialization_per_resource"] = p.avg_specialization;
    j["avg_repetition_per_resource"] = p.avg_repetition;
    j["variant_resource_ratio"] = p.variant_resource_ratio;
    j["variant_case_ratio"] = p.variant_case_ratio;
    out << j.dump(2) << '\n';
}

void write_profile_csv(std::ostream& out, const std::string& dataset, const DatasetProfile& p) {
    csv::write_row(out, {"dataset", "cases", "events", "activities", "resources", "dropped_events",
                         "avg_sequence_length_per_resource", "avg_specialization_per_resource",
                         "avg_repetition_per_resource", "variant_resource_ratio", "variant_case_ratio"});
    csv::write_row(out, {dataset, std::to_string(p.n_cases), std::to_string(p.n_events), std::to_string(p.n_activities),
                         std::to_string(p.n_resources), std::to_string(p.n_dropped_events),
                         format_double(p.avg_seq_len_per_resource), format_double(p.avg_specialization),
                         format_double(p.avg_repetition), format_double(p.variant_resource_ratio),
                         format_double(p.variant_case_ratio)});
}

void write_baseline_csv(std::ostream& out, const std::string& dataset, const std::string& perspective,
                        std::span<const BaselineRow> rows) {
    csv::write_row(out, {"dataset", "perspective", "prefix_length", "n_samples", "majority_accuracy", "leaked_fraction"});
    for (const auto& r : rows)
        csv::write_row(out, {dataset, perspective, std::to_string(r.prefix_length), std::to_string(r.n_samples),
                             format_double(r.majority_accuracy), format_double(r.leaked_fraction)});
}

}  // namespace rcpm
