#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tscp/csv.hpp"
#include "tscp/pipeline.hpp"
#include "tscp/types.hpp"

namespace tscp {

struct SyntheticSpec {
    Index length = 3000;
};

struct CsvSpec {
    std::string path;
    CsvSchema schema;
};

/// One pipeline configuration: either a decomposed assignment or a raw
/// baseline method.
struct RunSpec {
    bool decomposed = true;
    MethodAssignment assignment; // decomposed runs
    Method raw_method = Method::EnbPI;
};

struct SweepConfig {
    std::variant<SyntheticSpec, CsvSpec> dataset = SyntheticSpec{};
    std::vector<RunSpec> runs;
    std::vector<double> alphas = {0.1};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    HyperParams hyperparams;
    StlConfig stl;
    DecompMode mode = DecompMode::Full;
    double train_frac = 0.5;
    double cal_frac = 0.25;
    bool bonferroni = false;
    bool fixed_runtime = false; // report runtime_ms as 0 for byte-stable output
    bool write_intervals = true;
    std::string output_dir;
};

void validate_sweep(const SweepConfig& config);

struct EvalRow {
    std::string method_trend;
    std::string method_season;
    std::string method_remainder;
    bool decomposed = false;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    bool summary = false; // averaged across seeds
    bool failed = false;
    std::string error;
    double picp = 0.0;
    double piaw = 0.0;
    bool piaw_infinite = false;
    double runtime_ms = 0.0;
};

struct SweepOutcome {
    std::vector<EvalRow> rows;      // per-seed rows in config order
    std::vector<EvalRow> summaries; // one per (run, alpha)
    std::vector<RunResult> results; // aligned with rows (skipped for failures)
    bool any_failed = false;
};

/// Cartesian product of runs x alphas x seeds. Individual cell failures are
/// recorded in their row and the sweep continues. `workers` <= 1 runs
/// sequentially; results are always collected in config order.
SweepOutcome run_sweep(const SweepConfig& config, int workers = 1);

/// Writes results.csv, summary.json and per-cell interval files under
/// out_dir (created if needed).
void emit_report(const SweepConfig& config, const SweepOutcome& outcome,
                 const std::string& out_dir);

} // namespace tscp
