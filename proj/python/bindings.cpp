#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "rcpm/cli.hpp"
#include "rcpm/config.hpp"
#include "rcpm/encoders.hpp"
#include "rcpm/error.hpp"
#include "rcpm/evaluation.hpp"
#include "rcpm/profiler.hpp"
#include "rcpm/synthetic.hpp"

namespace py = pybind11;
using namespace rcpm;

namespace {

py::dict profile_dict(const DatasetProfile& p) {
    py::dict d;
    d["cases"] = p.n_cases;
    d["events"] = p.n_events;
    d["activities"] = p.n_activities;
    d["resources"] = p.n_resources;
    d["dropped_events"] = p.n_dropped_events;
    d["avg_sequence_length_per_resource"] = p.avg_seq_len_per_resource;
    d["avg_specialization_per_resource"] = p.avg_specialization;
    d["avg_repetition_per_resource"] = p.avg_repetition;
    d["variant_resource_ratio"] = p.variant_resource_ratio;
    d["variant_case_ratio"] = p.variant_case_ratio;
    return d;
}

py::object param_value(const ParamValue& v) {
    return std::visit([](auto x) { return py::cast(x); }, v);
}

py::dict record_dict(const ResultRecord& r) {
    py::dict d;
    d["dataset"] = r.dataset;
    d["prefix_length"] = r.prefix_length;
    d["encoding"] = std::string(to_string(r.encoding));
    d["model"] = std::string(to_string(r.model));
    d["accuracy"] = r.accuracy;
    d["n_train"] = r.n_train;
    d["n_test"] = r.n_test;
    d["leakage_fraction"] = r.leakage_fraction;
    d["cv_accuracy"] = r.cv_accuracy;
    py::dict params;
    for (const auto& [k, v] : r.best_params) params[py::str(k)] = param_value(v);
    d["best_params"] = params;
    d["failed"] = r.failed;
    d["error"] = r.error;
    d["wall_time_seconds"] = r.wall_time_seconds;
    return d;
}

ExperimentConfig experiment_from(const std::string& json_experiment, const std::string& dataset_id) {
    // Reuses the CLI schema: the experiment object plus top-level seed and workers.
    std::string doc = R"({"datasets": [{"id": ")" + dataset_id + R"(", "path": "unused"}], )" + json_experiment + "}";
    auto cfg = parse_cli_config(doc, ".");
    return cfg.experiment_for(cfg.datasets.front());
}

XesOptions xes_options(const std::optional<std::vector<std::string>>& activity_keys) {
    XesOptions o;
    if (activity_keys) o.activity_keys = *activity_keys;
    return o;
}

}  // namespace

PYBIND11_MODULE(_rcpm, m) {
    m.doc() = "Resource-centric next-activity prediction (native core)";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<EmptyLogError>(m, "EmptyLogError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<TimeoutError>(m, "TimeoutError", base.ptr());

    py::class_<EventLog>(m, "EventLog")
        .def_property_readonly("n_events", [](const EventLog& l) { return l.events.size(); })
        .def_readonly("activity_alphabet", &EventLog::activity_alphabet)
        .def_readonly("resource_set", &EventLog::resource_set)
        .def_readonly("case_set", &EventLog::case_set)
        .def_readonly("dropped_event_count", &EventLog::dropped_event_count)
        .def("serialize", [](const EventLog& l) { return serialize(l); })
        .def("__len__", [](const EventLog& l) { return l.events.size(); });

    m.def(
        "load_event_log",
        [](const std::filesystem::path& path, const std::string& format,
           const std::optional<std::vector<std::string>>& activity_keys) {
            return load_event_log(path, format, xes_options(activity_keys));
        },
        py::arg("path"), py::arg("format") = "xes", py::arg("activity_keys") = py::none());
    m.def(
        "parse_xes",
        [](const std::string& text, const std::optional<std::vector<std::string>>& activity_keys) {
            return parse_xes(text, xes_options(activity_keys));
        },
        py::arg("text"), py::arg("activity_keys") = py::none());
    m.def("parse_csv", [](const std::string& text) { return parse_csv(text); }, py::arg("text"));
    m.def(
        "synthetic_run_log",
        [](std::size_t n_resources, std::uint64_t seed) {
            RunLogSpec spec;
            spec.n_resources = n_resources;
            spec.seed = seed;
            return generate_run_structured_log(spec);
        },
        py::arg("n_resources") = 500, py::arg("seed") = 1);

    m.def("resource_view", [](const EventLog& l) { return resource_view(l).sequences; });
    m.def("case_view", [](const EventLog& l) { return case_view(l).sequences; });
    m.def("profile", [](const EventLog& l) { return profile_dict(profile(l)); });

    m.def("specialization", [](const std::vector<std::string>& s, std::size_t alphabet) {
        return specialization(s, alphabet);
    });
    m.def("repetition", [](const std::vector<std::string>& s) { return repetition(s); });
    m.def("run_features", [](const std::vector<int>& p) {
        auto f = run_features(p);
        return py::make_tuple(f.n_runs, f.avg_run_length);
    });
    m.def("count_2grams", [](const std::vector<int>& p) { return count_2grams(p); });
    m.def("mutual_information",
          [](const std::vector<int>& x, const std::vector<int>& y) { return mutual_information(x, y); });

    m.def(
        "prefix_grid",
        [](const EventLog& l, const std::vector<std::size_t>& candidates, std::size_t min_resources) {
            return prefix_grid(resource_view(l), candidates, min_resources);
        },
        py::arg("log"), py::arg("candidates"), py::arg("min_resources") = 100);

    m.def(
        "encode",
        [](const EventLog& l, std::size_t length, const std::string& encoding, std::size_t mi_k) {
            auto ds = build_prefix_dataset(resource_view(l), length, fit_label_encoder(l));
            auto enc = parse_encoding(encoding);
            CapabilityMap caps = capability_map(l);
            std::vector<std::size_t> all(ds.samples.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            SelectedBigrams sel = fit_bigram_selection(ds, all, mi_k);
            auto e = encode(ds, enc, {&caps, &sel});
            py::array_t<double> x({e.rows.rows(), e.rows.cols()});
            std::copy(e.rows.data().begin(), e.rows.data().end(), x.mutable_data());
            return py::make_tuple(e.feature_names, x, e.targets);
        },
        py::arg("log"), py::arg("length"), py::arg("encoding") = "SeqOnly", py::arg("mi_k") = 20,
        "Encodes the one-prefix-per-resource data set of `length`; bigram selection is fit on all rows.");

    m.def(
        "run_experiment",
        [](const EventLog& l, const std::string& config_json, const std::string& dataset_id) {
            auto cfg = experiment_from(config_json, dataset_id);
            std::vector<ResultRecord> records;
            {
                py::gil_scoped_release release;
                records = run_experiment(l, cfg);
            }
            py::list out;
            for (const auto& r : records) out.append(record_dict(r));
            return out;
        },
        py::arg("log"), py::arg("config_json") = R"("experiment": {})", py::arg("dataset_id") = "dataset",
        "`config_json` holds the body of a CLI configuration without `datasets`, e.g.\n"
        "'\"experiment\": {\"prefix_lengths\": [5]}, \"seed\": 3'.");

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code;
        {
            py::gil_scoped_release release;
            code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    });
}
