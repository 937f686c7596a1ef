#include "tscp/sweep.hpp"

#include "tscp/synthetic.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

namespace tscp {

namespace {

using json = nlohmann::ordered_json;

TimeSeries dataset_series(const SweepConfig& config, std::uint64_t seed) {
    if (const auto* synth = std::get_if<SyntheticSpec>(&config.dataset))
        return generate_synthetic(synth->length, seed);
    const auto& csv = std::get<CsvSpec>(config.dataset);
    return load_csv(csv.path, csv.schema);
}

SplitSpec fractional_split(Index total, double train_frac, double cal_frac) {
    SplitSpec split;
    split.train_end = static_cast<Index>(total * train_frac);
    split.cal_end = split.train_end + static_cast<Index>(total * cal_frac);
    return split;
}

struct Cell {
    Index run_idx = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

void fill_method_names(EvalRow& row, const RunSpec& spec) {
    if (spec.decomposed) {
        row.decomposed = true;
        row.method_trend = method_name(spec.assignment.trend_method);
        row.method_season = method_name(spec.assignment.season_method);
        row.method_remainder = method_name(spec.assignment.remainder_method);
    } else {
        row.decomposed = false;
        const std::string name = method_name(spec.raw_method);
        row.method_trend = row.method_season = row.method_remainder = name;
    }
}

void execute_cell(const SweepConfig& config, const Cell& cell, EvalRow& row, RunResult& result,
                  bool& have_result) {
    const RunSpec& spec = config.runs[cell.run_idx];
    fill_method_names(row, spec);
    row.alpha = cell.alpha;
    row.seed = cell.seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        TimeSeries series = dataset_series(config, cell.seed);
        SplitSpec split = fractional_split(series.size(), config.train_frac, config.cal_frac);
        HyperParams hp = config.hyperparams;
        hp.seed = cell.seed;
        if (spec.decomposed) {
            MethodAssignment assignment = spec.assignment;
            assignment.alpha = cell.alpha;
            assignment.bonferroni = config.bonferroni;
            result = run_decomposed(series, split, assignment, hp, config.stl, config.mode);
        } else {
            result = run_raw_baseline(series, split, spec.raw_method, cell.alpha, hp);
        }
        have_result = true;
        row.picp = result.coverage;
        row.piaw = result.width.value;
        row.piaw_infinite = result.width.infinite;
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        row.picp = std::nan("");
        row.piaw = std::nan("");
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;
    row.runtime_ms =
        config.fixed_runtime
            ? 0.0
            : std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count();
}

} // namespace

void validate_sweep(const SweepConfig& config) {
    if (config.runs.empty())
        throw Error(ErrorCode::ConfigError, "sweep has no run specifications");
    if (config.alphas.empty())
        throw Error(ErrorCode::ConfigError, "sweep has no alpha levels");
    if (config.seeds.empty())
        throw Error(ErrorCode::ConfigError, "sweep has no seeds");
    for (double a : config.alphas)
        if (!(a > 0.0 && a < 1.0))
            throw Error(ErrorCode::ConfigError, "alpha levels must lie in (0,1)");
    if (!(config.train_frac > 0.0 && config.cal_frac > 0.0 &&
          config.train_frac + config.cal_frac < 1.0))
        throw Error(ErrorCode::ConfigError, "split fractions must be positive and sum below 1");
    validate_hyperparams(config.hyperparams);
}

SweepOutcome run_sweep(const SweepConfig& config, int workers) {
    validate_sweep(config);
    // A missing input file is a caller error, not a per-cell failure.
    if (const auto* csv = std::get_if<CsvSpec>(&config.dataset))
        if (!std::filesystem::exists(csv->path))
            throw Error(ErrorCode::IoFailure, "cannot open dataset " + csv->path);

    std::vector<Cell> cells;
    for (Index r = 0; r < static_cast<Index>(config.runs.size()); ++r)
        for (double alpha : config.alphas)
            for (std::uint64_t seed : config.seeds) cells.push_back({r, alpha, seed});

    SweepOutcome outcome;
    outcome.rows.resize(cells.size());
    outcome.results.resize(cells.size());
    std::vector<char> have(cells.size(), 0);

    const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(cells.size())));
    if (n_workers == 1) {
        for (size_t i = 0; i < cells.size(); ++i) {
            bool ok = false;
            execute_cell(config, cells[i], outcome.rows[i], outcome.results[i], ok);
            have[i] = ok;
        }
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
                bool ok = false;
                execute_cell(config, cells[i], outcome.rows[i], outcome.results[i], ok);
                have[i] = ok;
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (char ok : have)
        if (!ok) outcome.any_failed = true;

    // Per-(run, alpha) summaries across seeds.
    const size_t n_seeds = config.seeds.size();
    for (size_t base = 0; base < cells.size(); base += n_seeds) {
        EvalRow summary;
        fill_method_names(summary, config.runs[cells[base].run_idx]);
        summary.alpha = cells[base].alpha;
        summary.summary = true;
        double picp_acc = 0.0, piaw_acc = 0.0, runtime_acc = 0.0;
        size_t ok_count = 0;
        for (size_t i = base; i < base + n_seeds; ++i) {
            const EvalRow& row = outcome.rows[i];
            if (row.failed) {
                summary.failed = true;
                continue;
            }
            picp_acc += row.picp;
            piaw_acc += row.piaw;
            runtime_acc += row.runtime_ms;
            summary.piaw_infinite |= row.piaw_infinite;
            ++ok_count;
        }
        if (ok_count > 0) {
            summary.picp = picp_acc / ok_count;
            summary.piaw = piaw_acc / ok_count;
            summary.runtime_ms = runtime_acc / ok_count;
        }
        outcome.summaries.push_back(summary);
    }
    return outcome;
}

namespace {

json summary_json(const SweepConfig& config, const SweepOutcome& outcome) {
    json configs = json::array();
    const size_t n_seeds = config.seeds.size();
    for (size_t s = 0; s < outcome.summaries.size(); ++s) {
        const EvalRow& summary = outcome.summaries[s];
        json entry;
        entry["method_trend"] = summary.method_trend;
        entry["method_season"] = summary.method_season;
        entry["method_remainder"] = summary.method_remainder;
        entry["decomposed"] = summary.decomposed;
        entry["alpha"] = summary.alpha;
        entry["seeds"] = n_seeds;

        std::vector<double> picps, piaws;
        json errors = json::array();
        for (size_t i = s * n_seeds; i < (s + 1) * n_seeds && i < outcome.rows.size(); ++i) {
            const EvalRow& row = outcome.rows[i];
            if (row.failed) {
                errors.push_back(row.error);
                continue;
            }
            picps.push_back(row.picp);
            piaws.push_back(row.piaw);
        }
        auto mean_se = [](const std::vector<double>& v) {
            json out;
            if (v.empty()) {
                out["mean"] = nullptr;
                out["se"] = nullptr;
                return out;
            }
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            if (std::isinf(mean)) {
                out["mean"] = nullptr;
                out["se"] = nullptr;
                return out;
            }
            double var = 0.0;
            for (double x : v) var += (x - mean) * (x - mean);
            const double se =
                v.size() > 1 ? std::sqrt(var / (v.size() - 1) / v.size()) : 0.0;
            out["mean"] = mean;
            out["se"] = se;
            return out;
        };
        entry["picp"] = mean_se(picps);
        entry["piaw"] = mean_se(piaws);
        entry["piaw_infinite"] = summary.piaw_infinite;
        entry["errors"] = errors;
        configs.push_back(entry);
    }
    json root;
    root["configs"] = configs;
    return root;
}

void write_intervals_csv(const std::filesystem::path& path, const RunResult& result,
                         Index test_start) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << "t,actual,lower,upper,component\n";
    auto dump = [&](const IntervalSeries& iv, const Vec& actuals, const std::string& name) {
        for (Index i = 0; i < iv.size(); ++i)
            out << (test_start + i + 1) << ',' << format_number(actuals[i]) << ','
                << format_number(iv.lower[i]) << ',' << format_number(iv.upper[i]) << ',' << name
                << '\n';
    };
    for (const auto& c : result.components)
        dump(c.intervals, c.component_actuals, component_name(c.component));
    dump(result.intervals, result.test_actuals,
         result.components.empty() ? "raw" : "recomposed");
}

} // namespace

void emit_report(const SweepConfig& config, const SweepOutcome& outcome,
                 const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw Error(ErrorCode::IoFailure, "cannot create output directory " + out_dir);

    const fs::path results_path = fs::path(out_dir) / "results.csv";
    std::ofstream results(results_path);
    if (!results)
        throw Error(ErrorCode::IoFailure, "cannot write " + results_path.string());
    results << "method_trend,method_season,method_remainder,decomposed,alpha,seed,picp,piaw,"
               "runtime_ms\n";
    for (const EvalRow& row : outcome.rows) {
        results << row.method_trend << ',' << row.method_season << ',' << row.method_remainder
                << ',' << (row.decomposed ? 1 : 0) << ',' << format_number(row.alpha) << ','
                << row.seed << ',' << format_number(row.picp) << ',' << format_number(row.piaw)
                << ',' << format_number(row.runtime_ms) << '\n';
    }
    results.close();

    std::ofstream summary(fs::path(out_dir) / "summary.json");
    summary << summary_json(config, outcome).dump(2) << '\n';

    if (config.write_intervals) {
        const fs::path dir = fs::path(out_dir) / "intervals";
        fs::create_directories(dir, ec);
        for (size_t i = 0; i < outcome.rows.size(); ++i) {
            if (outcome.rows[i].failed) continue;
            const RunResult& result = outcome.results[i];
            if (result.intervals.size() == 0) continue;
            char name[32];
            std::snprintf(name, sizeof(name), "cell_%03zu.csv", i);
            // test_start: infer from actual lengths; the split is fractional
            // over the dataset, so recompute it.
            TimeSeries probe = dataset_series(config, outcome.rows[i].seed);
            const Index test_start = probe.size() - result.test_actuals.size();
            write_intervals_csv(dir / name, result, test_start);
        }
    }
}

} // namespace tscp
