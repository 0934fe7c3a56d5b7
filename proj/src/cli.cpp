#include "rcpm/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "rcpm/config.hpp"
#include "rcpm/error.hpp"
#include "rcpm/parallel.hpp"
#include "rcpm/prefixer.hpp"
#include "rcpm/profiler.hpp"
#include "rcpm/report_io.hpp"

namespace rcpm {
namespace {

struct Options {
    std::string config;
    std::string dataset;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> workers;
    bool quiet = false;
};

struct Context {
    CliConfig cfg;
    const DatasetEntry* dataset = nullptr;
    std::filesystem::path out_dir;
    bool quiet = false;
};

Context prepare(const Options& opt) {
    Context ctx;
    ctx.cfg = load_cli_config(opt.config);
    if (opt.seed) ctx.cfg.experiment.seed = *opt.seed;
    if (opt.workers) ctx.cfg.experiment.workers = *opt.workers;
    if (ctx.cfg.experiment.workers == 0) ctx.cfg.experiment.workers = default_workers();
    if (opt.out) ctx.cfg.output_dir = *opt.out;
    if (!opt.dataset.empty()) {
        ctx.dataset = &ctx.cfg.dataset(opt.dataset);
    } else if (ctx.cfg.datasets.size() == 1) {
        ctx.dataset = &ctx.cfg.datasets.front();
    } else {
        throw ConfigError("configuration lists several datasets; choose one with --dataset");
    }
    ctx.out_dir = ctx.cfg.output_dir / ctx.dataset->id;
    ctx.quiet = opt.quiet;
    return ctx;
}

EventLog load(const DatasetEntry& d) {
    if (!std::filesystem::exists(d.path)) throw ConfigError("input file '" + d.path.string() + "' does not exist");
    return load_event_log(d.path, d.format, d.xes, d.csv);
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << content;
}

int cmd_profile(const Context& ctx, std::ostream& out, std::ostream& err) {
    const auto& d = *ctx.dataset;
    auto log = load(d);
    auto p = profile(log);
    const auto exp = ctx.cfg.experiment_for(d);

    std::ostringstream json;
    write_profile_json(json, d.id, p);
    std::ostringstream csv_text;
    write_profile_csv(csv_text, d.id, p);
    write_file(ctx.out_dir / "profile.json", json.str());
    write_file(ctx.out_dir / "profile.csv", csv_text.str());

    auto by_resource = majority_baseline(resource_view(log), log, exp.candidate_lengths, exp.min_resources,
                                         exp.split_ratio, exp.seed);
    auto by_case = majority_baseline(case_view(log), log, d.case_prefix_lengths, exp.min_resources, exp.split_ratio,
                                     exp.seed);
    std::ostringstream br;
    write_baseline_csv(br, d.id, "resource", by_resource);
    std::ostringstream bc;
    write_baseline_csv(bc, d.id, "case", by_case);
    write_file(ctx.out_dir / "baseline_resource.csv", br.str());
    write_file(ctx.out_dir / "baseline_case.csv", bc.str());

    if (ctx.quiet) {
        out << csv_text.str();
        return kExitOk;
    }
    out << "Dataset summary: " << d.id << '\n'
        << "  cases                         " << p.n_cases << '\n'
        << "  events                        " << p.n_events << '\n'
        << "  activities                    " << p.n_activities << '\n'
        << "  unique resources              " << p.n_resources << '\n'
        << "  dropped events (no resource)  " << p.n_dropped_events << '\n'
        << "  avg. sequence length/resource " << fixed(p.avg_seq_len_per_resource, 2) << '\n'
        << "  avg. specialization/resource  " << fixed(p.avg_specialization, 2) << '\n'
        << "  avg. repetition/resource      " << fixed(p.avg_repetition, 2) << '\n'
        << "  variant/resource ratio        " << fixed(p.variant_resource_ratio, 2) << '\n'
        << "  variant/case ratio            " << fixed(p.variant_case_ratio, 2) << '\n';
    auto summarise = [&](const char* name, const std::vector<BaselineRow>& rows) {
        if (rows.empty()) {
            err << "warning: no admissible prefix length for the " << name << " baseline\n";
            return;
        }
        double acc = 0.0;
        double leak = 0.0;
        for (const auto& r : rows) {
            acc += r.majority_accuracy;
            leak += r.leaked_fraction;
        }
        auto n = static_cast<double>(rows.size());
        out << "  majority accuracy (" << name << ", avg. over " << rows.size() << " lengths) " << fixed(acc / n, 2)
            << ", example leakage " << fixed(100.0 * leak / n, 1) << "%\n";
    };
    summarise("resource", by_resource);
    summarise("case", by_case);
    return kExitOk;
}

int cmd_grid(const Context& ctx, std::ostream& out, std::ostream& err) {
    const auto& d = *ctx.dataset;
    const auto exp = ctx.cfg.experiment_for(d);
    auto view = resource_view(load(d));
    auto admissible = prefix_grid(view, exp.candidate_lengths, exp.min_resources);
    if (!ctx.quiet) out << "prefix_length,eligible_resources,admissible\n";
    for (auto length : exp.candidate_lengths) {
        bool ok = std::find(admissible.begin(), admissible.end(), length) != admissible.end();
        if (!ctx.quiet) out << length << ',' << eligible_resources(view, length).size() << ',' << (ok ? "yes" : "no") << '\n';
    }
    out << "admissible:";
    for (auto length : admissible) out << ' ' << length;
    out << '\n';
    if (admissible.empty())
        err << "warning: no candidate prefix length keeps at least " << exp.min_resources << " resources\n";
    return kExitOk;
}

void print_tables(const AggregateTable& table, std::ostream& out) {
    out << "dataset,model,encoding,prefix_lengths,mean_accuracy,std_accuracy,mean_improvement,std_improvement\n";
    for (const auto& row : table.accuracy) {
        out << row.dataset << ',' << to_string(row.model) << ',' << to_string(row.encoding) << ',' << row.n << ','
            << fixed(row.mean, 3) << ',' << fixed(row.std, 3);
        auto it = std::find_if(table.improvement.begin(), table.improvement.end(), [&](const AggregateRow& imp) {
            return imp.dataset == row.dataset && imp.model == row.model && imp.encoding == row.encoding;
        });
        if (it != table.improvement.end()) out << ',' << fixed(it->mean, 3) << ',' << fixed(it->std, 3);
        else out << ",,";
        out << '\n';
    }
}

int cmd_run(const Context& ctx, std::ostream& out, std::ostream& err) {
    const auto& d = *ctx.dataset;
    auto exp = ctx.cfg.experiment_for(d);
    auto log = load(d);
    auto records = run_experiment(log, exp);
    auto table = aggregate(records);
    export_report(records, table, ctx.out_dir, ctx.cfg.formats);

    std::size_t failed = 0;
    for (const auto& r : records) {
        if (!r.failed) continue;
        ++failed;
        err << "cell failed: L=" << r.prefix_length << ' ' << to_string(r.encoding) << '/' << to_string(r.model) << ": "
            << r.error << '\n';
    }
    if (!ctx.quiet) out << records.size() << " result records written to " << ctx.out_dir.string() << '\n';
    print_tables(table, out);
    return failed ? kExitCellFailure : kExitOk;
}

int cmd_report(const Context& ctx, std::ostream& out, std::ostream&) {
    std::vector<ResultRecord> records;
    auto json_path = ctx.out_dir / "results.json";
    auto csv_path = ctx.out_dir / "results.csv";
    if (std::filesystem::exists(json_path)) {
        std::ifstream in(json_path);
        records = read_results_json(in);
    } else if (std::filesystem::exists(csv_path)) {
        std::ifstream in(csv_path);
        records = read_results_csv(in);
    } else {
        throw ConfigError("no results found in '" + ctx.out_dir.string() + "'; run 'rcpm run' first");
    }
    auto table = aggregate(records);
    std::ostringstream acc;
    write_aggregate_wide_csv(acc, table.accuracy);
    std::ostringstream imp;
    write_aggregate_wide_csv(imp, table.improvement);
    std::ostringstream agg;
    write_aggregates_json(agg, table);
    write_file(ctx.out_dir / "accuracy_by_model.csv", acc.str());
    write_file(ctx.out_dir / "improvement_vs_seqonly.csv", imp.str());
    write_file(ctx.out_dir / "aggregates.json", agg.str());
    print_tables(table, out);
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Resource-centric next-activity prediction toolkit", "rcpm"};
    app.require_subcommand(1);
    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "JSON configuration file")->required();
        sub->add_option("--dataset", opt.dataset, "Dataset id from the configuration");
        sub->add_option("--seed", opt.seed, "Master random seed (overrides the configuration)");
        sub->add_option("--out", opt.out, "Output directory (overrides the configuration)");
        sub->add_option("--workers", opt.workers, "Worker threads; 0 = available parallelism");
        sub->add_flag("--quiet", opt.quiet, "Only machine-parseable summaries on stdout");
    };
    auto* profile_cmd = app.add_subcommand("profile", "Dataset summary statistics and majority baselines");
    auto* grid_cmd = app.add_subcommand("grid", "Admissible prefix lengths");
    auto* run_cmd = app.add_subcommand("run", "Run the encoding x model experiment");
    auto* report_cmd = app.add_subcommand("report", "Aggregate existing results");
    for (auto* sub : {profile_cmd, grid_cmd, run_cmd, report_cmd}) add_common(sub);

    std::vector<std::string> argv_store{"rcpm"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        Context ctx = prepare(opt);
        if (profile_cmd->parsed()) return cmd_profile(ctx, out, err);
        if (grid_cmd->parsed()) return cmd_grid(ctx, out, err);
        if (run_cmd->parsed()) return cmd_run(ctx, out, err);
        return cmd_report(ctx, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const EmptyLogError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitCellFailure;
    }
}

}  // namespace rcpm
