#include "cama/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cama/csv_io.hpp"
#include "cama/errors.hpp"
#include "cama/simulation.hpp"
#include "cama/svg_plot.hpp"
#include "cama/synth.hpp"

namespace cama::cli {

namespace {

std::string pretty(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

std::size_t worker_threads() {
    const char* env = std::getenv("CAMA_THREADS");
    if (env != nullptr) {
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && parsed >= 1) {
            return static_cast<std::size_t>(parsed);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return parts;
}

std::string metric_summary(MetricKind kind, const Cohort& cohort) {
    try {
        const double pre = metric_value(kind, cohort.labels(), cohort.avail_scores());
        const double post = metric_value(kind, cohort.labels(), cohort.acquired_scores());
        return "m_pre=" + pretty(pre) + " m_post=" + pretty(post);
    } catch (const UndefinedMetricError&) {
        return "undefined (single class)";
    }
}

int cmd_generate(const SynthConfig& config, const std::string& out_path) {
    const Cohort cohort = generate(config);
    write_cohort_csv(out_path, cohort);
    std::cout << "wrote " << out_path << "\n"
              << "n=" << cohort.size() << " k=" << cohort.imputation_count()
              << " prevalence=" << pretty(config.prevalence)
              << " positives=" << cohort.positives() << "\n"
              << "auroc: " << metric_summary(MetricKind::Auroc, cohort) << "\n"
              << "auprc: " << metric_summary(MetricKind::Auprc, cohort) << "\n";
    return kExitOk;
}

struct EvaluateArgs {
    std::vector<std::string> cohort_paths;
    std::string strategies = "all";
    std::string metrics = "auroc,auprc";
    std::size_t grid_points = 21;
    std::string rounding = "round";
    std::uint64_t runs = 1;
    std::uint64_t seed = 0;
    bool no_filter = false;
    std::string oracle_mode = "evolving";
    std::string out_curves = "curves.csv";
    std::string out_report = "report.csv";
};

EvalConfig build_eval_config(const EvaluateArgs& args, std::size_t min_k) {
    EvalConfig config;
    if (args.strategies == "all") {
        config.strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
    } else {
        for (const std::string& part : split_list(args.strategies)) {
            const auto kind = parse_strategy(part);
            if (!kind) {
                throw ConfigError("unknown strategy '" + part + "'");
            }
            config.strategies.push_back(*kind);
        }
    }
    if (min_k == 0) {
        std::string blocked;
        for (StrategyKind kind : config.strategies) {
            if (needs_imputations(kind)) {
                blocked += blocked.empty() ? "" : ", ";
                blocked += std::string(strategy_id(kind));
            }
        }
        if (!blocked.empty()) {
            throw ConfigError("cohort has no s_imp columns but imputation strategies were "
                              "requested: " + blocked);
        }
    }
    for (const std::string& part : split_list(args.metrics)) {
        const auto kind = parse_metric(part);
        if (!kind) {
            throw ConfigError("unknown metric '" + part + "'");
        }
        config.metrics.push_back(*kind);
    }
    const auto rounding = parse_rounding(args.rounding);
    if (!rounding) {
        throw ConfigError("unknown rounding rule '" + args.rounding + "'");
    }
    config.rounding = *rounding;
    if (args.oracle_mode == "evolving") {
        config.oracle_mode = OracleMode::Evolving;
    } else if (args.oracle_mode == "frozen") {
        config.oracle_mode = OracleMode::Frozen;
    } else {
        throw ConfigError("unknown oracle mode '" + args.oracle_mode + "'");
    }
    config.grid_points = args.grid_points;
    config.runs = args.runs;
    config.base_seed = args.seed;
    config.filter_negative = !args.no_filter;
    config.threads = worker_threads();
    return config;
}

int cmd_evaluate(const EvaluateArgs& args) {
    std::vector<Cohort> cohorts;
    std::vector<std::pair<std::string, const Cohort*>> tasks;
    cohorts.reserve(args.cohort_paths.size());
    for (const std::string& path : args.cohort_paths) {
        cohorts.push_back(read_cohort_csv(path));
    }
    std::size_t min_k = cohorts.front().imputation_count();
    for (std::size_t i = 0; i < cohorts.size(); ++i) {
        min_k = std::min(min_k, cohorts[i].imputation_count());
        std::string task = std::filesystem::path(args.cohort_paths[i]).stem().string();
        for (const auto& [existing, cohort] : tasks) {
            if (existing == task) {
                task += "_" + std::to_string(i);
                break;
            }
        }
        tasks.emplace_back(std::move(task), &cohorts[i]);
    }

    const EvalConfig config = build_eval_config(args, min_k);
    const EvalOutput output = run_evaluation(tasks, config);
    write_curves_csv(args.out_curves, output.curves);
    write_report_csv(args.out_report, output.report);
    for (const std::string& line : output.drop_log) {
        std::cout << line << "\n";
    }
    std::cout << "wrote " << args.out_curves << " (" << output.curves.size() << " rows)\n"
              << "wrote " << args.out_report << " (" << output.report.size() << " rows)\n";
    return kExitOk;
}

int cmd_validate(const std::string& path) {
    const ValidationReport report = validate_cohort_csv(path);
    for (const ValidationIssue& issue : report.issues) {
        std::cout << path << ":" << issue.row << ": " << issue.message << "\n";
    }
    if (!report.ok()) {
        std::cout << report.issues.size() << " issue(s)\n";
        return kExitData;
    }
    std::cout << "OK: n=" << report.n << " k=" << report.k
              << " positives=" << report.positives << " negatives=" << report.negatives
              << "\n";
    if (report.positives == 0 || report.negatives == 0) {
        std::cout << "warning: single-class cohort; AUROC evaluation will fail\n";
    }
    return kExitOk;
}

int cmd_plot(const std::string& curves_path, const std::string& out_path) {
    const std::vector<CurveRow> rows = read_curves_csv(curves_path);
    const std::string svg = render_curves_svg(rows);
    std::ofstream out(out_path);
    if (!out) {
        throw DataError("cannot open " + out_path + " for writing");
    }
    out << svg;
    if (!out) {
        throw DataError("failed writing " + out_path);
    }
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"cohort-level modality acquisition simulator"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a synthetic cohort CSV");
    SynthConfig synth;
    std::string gen_out;
    gen->add_option("--n", synth.n, "cohort size");
    gen->add_option("--k", synth.k, "imputation samples per record");
    gen->add_option("--prevalence", synth.prevalence, "P(label=1), in (0,1)");
    gen->add_option("--signal-avail", synth.signal_avail, "class separation before acquisition");
    gen->add_option("--signal-acquired", synth.signal_acquired,
                    "class separation after acquisition");
    gen->add_option("--imp-fidelity", synth.imp_fidelity,
                    "imputation concentration on the acquired score, in [0,1]");
    gen->add_option("--noise", synth.noise_scale, "per-sample noise scale");
    gen->add_option("--seed", synth.seed, "generator seed");
    gen->add_option("--out", gen_out, "output cohort CSV path")->required();

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "run acquisition sweeps and export results");
    EvaluateArgs eval_args;
    eval->add_option("cohorts", eval_args.cohort_paths, "cohort CSV file(s), one task each")
        ->required();
    eval->add_option("--strategies", eval_args.strategies,
                     "comma-separated strategy ids, or 'all'");
    eval->add_option("--metrics", eval_args.metrics, "comma-separated metrics (auroc,auprc)");
    eval->add_option("--grid-points", eval_args.grid_points, "budget grid size (>= 2)");
    eval->add_option("--rounding", eval_args.rounding, "acquired-count rule: round|floor|ceil");
    eval->add_option("--runs", eval_args.runs, "independent runs; run r uses seed+r");
    eval->add_option("--seed", eval_args.seed, "base seed");
    eval->add_flag("--no-filter", eval_args.no_filter, "keep negative-gain tasks");
    eval->add_option("--oracle-mode", eval_args.oracle_mode,
                     "oracle gain baseline: evolving|frozen");
    eval->add_option("--out-curves", eval_args.out_curves, "curves CSV output path");
    eval->add_option("--out-report", eval_args.out_report, "gain report CSV output path");

    // validate
    auto* val = app.add_subcommand("validate", "check a cohort CSV against the schema");
    std::string val_path;
    val->add_option("cohort", val_path, "cohort CSV file")->required();

    // plot
    auto* plot = app.add_subcommand("plot", "render curves CSV as a static SVG");
    std::string plot_curves;
    std::string plot_out = "plot.svg";
    plot->add_option("curves", plot_curves, "curves CSV file")->required();
    plot->add_option("--out", plot_out, "output SVG path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return cmd_generate(synth, gen_out);
        }
        if (eval->parsed()) {
            return cmd_evaluate(eval_args);
        }
        if (val->parsed()) {
            return cmd_validate(val_path);
        }
        if (plot->parsed()) {
            return cmd_plot(plot_curves, plot_out);
        }
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMetricConfig;
    }
    return kExitUsage;
}

}  // namespace cama::cli
