// tscp command-line tool: synthesize series, inspect decompositions, and
// drive single runs or full evaluation sweeps from JSON configs.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <set>
#include <thread>

#include "tscp/csv.hpp"
#include "tscp/stl.hpp"
#include "tscp/sweep.hpp"
#include "tscp/synthetic.hpp"

namespace {

using json = nlohmann::json;
using namespace tscp;

// Typo safety: every config object lists its legal keys explicitly.
void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw Error(ErrorCode::ConfigError, "unknown key '" + key + "' in " + where);
}

Method parse_method(const json& v, const std::string& where) {
    if (!v.is_string())
        throw Error(ErrorCode::ConfigError, where + " must be a method name string");
    return method_from_name(v.get<std::string>());
}

RunSpec parse_run(const json& obj) {
    if (!obj.is_object())
        throw Error(ErrorCode::ConfigError, "each entry in 'runs' must be an object");
    RunSpec spec;
    spec.decomposed = obj.value("decomposed", true);
    if (spec.decomposed) {
        check_keys(obj, {"decomposed", "trend", "season", "remainder"}, "runs[]");
        if (!obj.contains("trend") || !obj.contains("season") || !obj.contains("remainder"))
            throw Error(ErrorCode::ConfigError,
                        "decomposed run needs 'trend', 'season' and 'remainder'");
        spec.assignment.trend_method = parse_method(obj.at("trend"), "runs[].trend");
        spec.assignment.season_method = parse_method(obj.at("season"), "runs[].season");
        spec.assignment.remainder_method = parse_method(obj.at("remainder"), "runs[].remainder");
        validate_assignment(spec.assignment);
    } else {
        check_keys(obj, {"decomposed", "method"}, "runs[]");
        if (!obj.contains("method"))
            throw Error(ErrorCode::ConfigError, "raw run needs 'method'");
        spec.raw_method = parse_method(obj.at("method"), "runs[].method");
    }
    return spec;
}

void parse_dataset(const json& obj, SweepConfig& config) {
    if (!obj.is_object() || !obj.contains("type"))
        throw Error(ErrorCode::ConfigError, "'dataset' must be an object with a 'type'");
    const std::string type = obj.at("type").get<std::string>();
    if (type == "synthetic") {
        check_keys(obj, {"type", "length"}, "dataset");
        SyntheticSpec synth;
        synth.length = obj.value("length", Index{3000});
        config.dataset = synth;
    } else if (type == "csv") {
        check_keys(obj, {"type", "path", "time_col", "value_col", "feature_cols", "period"},
                   "dataset");
        if (!obj.contains("path") || !obj.contains("period"))
            throw Error(ErrorCode::ConfigError, "csv dataset needs 'path' and 'period'");
        CsvSpec csv;
        csv.path = obj.at("path").get<std::string>();
        csv.schema.time_col = obj.value("time_col", std::string("t"));
        csv.schema.value_col = obj.value("value_col", std::string("y"));
        if (obj.contains("feature_cols"))
            csv.schema.feature_cols = obj.at("feature_cols").get<std::vector<std::string>>();
        csv.schema.period = obj.at("period").get<Index>();
        config.dataset = csv;
    } else {
        throw Error(ErrorCode::ConfigError, "dataset type must be 'synthetic' or 'csv'");
    }
}

void parse_hyperparams(const json& obj, HyperParams& hp) {
    check_keys(obj,
               {"gamma", "ensemble_size", "cv_folds", "neighborhood", "decay", "knn_k",
                "lag_order", "ridge_penalty", "recency_periods", "seed"},
               "hyperparams");
    hp.gamma = obj.value("gamma", hp.gamma);
    hp.ensemble_size = obj.value("ensemble_size", hp.ensemble_size);
    hp.cv_folds = obj.value("cv_folds", hp.cv_folds);
    hp.neighborhood = obj.value("neighborhood", hp.neighborhood);
    hp.decay = obj.value("decay", hp.decay);
    hp.knn_k = obj.value("knn_k", hp.knn_k);
    hp.lag_order = obj.value("lag_order", hp.lag_order);
    hp.ridge_penalty = obj.value("ridge_penalty", hp.ridge_penalty);
    hp.recency_periods = obj.value("recency_periods", hp.recency_periods);
    hp.seed = obj.value("seed", hp.seed);
}

void parse_stl(const json& obj, StlConfig& stl) {
    check_keys(obj,
               {"seasonal_span", "trend_span", "lowpass_span", "inner_iterations",
                "outer_iterations", "robust", "periodic"},
               "stl");
    stl.seasonal_span = obj.value("seasonal_span", stl.seasonal_span);
    stl.trend_span = obj.value("trend_span", stl.trend_span);
    stl.lowpass_span = obj.value("lowpass_span", stl.lowpass_span);
    stl.inner_iterations = obj.value("inner_iterations", stl.inner_iterations);
    stl.outer_iterations = obj.value("outer_iterations", stl.outer_iterations);
    stl.robust = obj.value("robust", stl.robust);
    stl.periodic = obj.value("periodic", stl.periodic);
}

SweepConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open config " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, std::string("config parse error: ") + e.what());
    }
    check_keys(root,
               {"dataset", "runs", "alphas", "seeds", "hyperparams", "stl", "mode", "train_frac",
                "cal_frac", "bonferroni", "fixed_runtime", "write_intervals", "output_dir"},
               "config root");

    SweepConfig config;
    if (root.contains("dataset")) parse_dataset(root.at("dataset"), config);
    if (!root.contains("runs") || !root.at("runs").is_array())
        throw Error(ErrorCode::ConfigError, "config needs a 'runs' array");
    for (const auto& entry : root.at("runs")) config.runs.push_back(parse_run(entry));
    if (root.contains("alphas")) config.alphas = root.at("alphas").get<std::vector<double>>();
    if (root.contains("seeds"))
        config.seeds = root.at("seeds").get<std::vector<std::uint64_t>>();
    if (root.contains("hyperparams")) parse_hyperparams(root.at("hyperparams"), config.hyperparams);
    if (root.contains("stl")) parse_stl(root.at("stl"), config.stl);
    if (root.contains("mode")) {
        const std::string mode = root.at("mode").get<std::string>();
        if (mode == "full")
            config.mode = DecompMode::Full;
        else if (mode == "fit_once")
            config.mode = DecompMode::FitOnce;
        else if (mode == "refit")
            config.mode = DecompMode::Refit;
        else
            throw Error(ErrorCode::ConfigError, "mode must be 'full', 'fit_once' or 'refit'");
    }
    config.train_frac = root.value("train_frac", config.train_frac);
    config.cal_frac = root.value("cal_frac", config.cal_frac);
    config.bonferroni = root.value("bonferroni", config.bonferroni);
    config.fixed_runtime = root.value("fixed_runtime", config.fixed_runtime);
    config.write_intervals = root.value("write_intervals", config.write_intervals);
    config.output_dir = root.value("output_dir", std::string("out"));
    validate_sweep(config);
    return config;
}

std::string resolve_out_dir(const SweepConfig& config, const std::string& override_dir) {
    if (!override_dir.empty()) return override_dir;
    if (const char* env = std::getenv("TSCP_OUTPUT_DIR"); env && *env) return env;
    return config.output_dir;
}

int cmd_synth(Index length, std::uint64_t seed, const std::string& out) {
    TimeSeries series = generate_synthetic(length, seed);
    save_series_csv(out, series, CsvSchema{});
    std::cout << "wrote " << out << " (" << series.size() << " rows)\n";
    return 0;
}

int cmd_decompose(const std::string& input, Index period, const std::string& out,
                  const StlConfig& stl) {
    CsvSchema schema;
    schema.period = period;
    TimeSeries series = load_csv(input, schema);
    DecompositionResult decomp = stl_decompose(series, stl);

    const Vec residual =
        (series.values - decomp.trend - decomp.seasonal - decomp.remainder).cwiseAbs();
    std::cout << "max reconstruction residual: " << residual.maxCoeff() << "\n";

    std::ofstream os(out);
    if (!os)
        throw Error(ErrorCode::IoFailure, "cannot write " + out);
    os << "t,y,trend,seasonal,remainder\n";
    for (Index i = 0; i < series.size(); ++i)
        os << series.time_index[i] << ',' << format_number(series.values[i]) << ','
           << format_number(decomp.trend[i]) << ',' << format_number(decomp.seasonal[i]) << ','
           << format_number(decomp.remainder[i]) << '\n';
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, int workers, const std::string& out_override,
              bool single_run) {
    SweepConfig config = parse_config(config_path);
    if (single_run &&
        (config.runs.size() != 1 || config.alphas.size() != 1 || config.seeds.size() != 1))
        throw Error(ErrorCode::ConfigError,
                    "'run' expects exactly one run, one alpha and one seed; use 'sweep' for grids");
    SweepOutcome outcome = run_sweep(config, workers);
    const std::string out_dir = resolve_out_dir(config, out_override);
    emit_report(config, outcome, out_dir);

    for (const EvalRow& row : outcome.summaries) {
        std::cout << row.method_trend << '/' << row.method_season << '/' << row.method_remainder
                  << (row.decomposed ? " (decomposed)" : " (raw)") << " alpha="
                  << format_number(row.alpha);
        if (row.failed && row.picp != row.picp)
            std::cout << "  FAILED\n";
        else
            std::cout << "  picp=" << format_number(row.picp)
                      << " piaw=" << format_number(row.piaw) << (row.failed ? "  (partial)" : "")
                      << "\n";
    }
    std::cout << "report written to " << out_dir << "\n";
    return outcome.any_failed ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"STL decomposition + regime-matched conformal prediction toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate the synthetic benchmark series as CSV");
    Index length = 3000;
    std::uint64_t seed = 42;
    std::string synth_out = "synthetic.csv";
    synth->add_option("--length", length, "Series length (minimum 60)")->capture_default_str();
    synth->add_option("--seed", seed, "RNG seed")->capture_default_str();
    synth->add_option("--out", synth_out, "Output CSV path")->capture_default_str();

    // decompose
    auto* decompose = app.add_subcommand("decompose", "Run STL and write component columns");
    std::string dec_input, dec_out = "decomposition.csv";
    Index period = 0;
    StlConfig stl;
    decompose->add_option("--input", dec_input, "Input CSV (columns t,y)")->required();
    decompose->add_option("--period", period, "Seasonal period")->required();
    decompose->add_option("--out", dec_out, "Output CSV path")->capture_default_str();
    decompose->add_option("--seasonal-span", stl.seasonal_span, "Cycle-subseries LOESS span")
        ->capture_default_str();
    decompose->add_option("--trend-span", stl.trend_span, "Trend LOESS span (0 = auto)")
        ->capture_default_str();
    decompose->add_flag("--robust", stl.robust, "Enable robustness iterations");
    decompose->add_flag("--periodic", stl.periodic, "Force a strictly periodic seasonal");

    // run / sweep share config plumbing
    std::string run_config, sweep_config, out_override;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    auto* run = app.add_subcommand("run", "Execute one pipeline configuration from JSON");
    run->add_option("--config", run_config, "JSON config path")->required();
    run->add_option("--out-dir", out_override,
                    "Output directory (overrides config and TSCP_OUTPUT_DIR)");
    auto* sweep = app.add_subcommand("sweep", "Execute a multi-seed evaluation sweep from JSON");
    sweep->add_option("--config", sweep_config, "JSON config path")->required();
    sweep->add_option("--workers", workers, "Parallel sweep workers")->capture_default_str();
    sweep->add_option("--out-dir", out_override,
                      "Output directory (overrides config and TSCP_OUTPUT_DIR)");

    try {
        app.parse(argc, argv);
        if (synth->parsed()) {
            if (length < 60)
                throw Error(ErrorCode::BadArgument, "--length must be at least 60");
            return cmd_synth(length, seed, synth_out);
        }
        if (decompose->parsed()) return cmd_decompose(dec_input, period, dec_out, stl);
        if (run->parsed()) return cmd_sweep(run_config, 1, out_override, true);
        return cmd_sweep(sweep_config, workers, out_override, false);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
