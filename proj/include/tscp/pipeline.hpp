#pragma once

#include <vector>

#include "tscp/metrics.hpp"
#include "tscp/stl.hpp"
#include "tscp/types.hpp"

namespace tscp {

/// Pointwise sum of component bounds; infinities propagate.
IntervalSeries recompose_intervals(const IntervalSeries& trend, const IntervalSeries& seasonal,
                                   const IntervalSeries& remainder);

double bonferroni_alpha(double alpha, int components = 3);

/// How components are obtained for test timestamps. Full (the default)
/// decomposes the entire series once and reads test-range components
/// directly from it. FitOnce decomposes train+cal only and extends the
/// seasonal component periodically and the trend by its autoregressive
/// model; Refit re-runs the decomposition on every prefix of the series as
/// observations arrive.
enum class DecompMode { Full, FitOnce, Refit };

struct ComponentForecast {
    Component component = Component::Raw;
    Method method = Method::EnbPI;
    double effective_alpha = 0.0;
    Vec predictions;          // test range
    IntervalSeries intervals; // test range
    Vec component_actuals;    // component (pseudo-)observations over the test range
    bool empty_selection = false;
};

struct RunResult {
    std::vector<ComponentForecast> components; // empty for raw baselines
    IntervalSeries intervals;                  // recomposed, or raw intervals
    Vec predictions;
    Vec test_actuals; // observed response over the test range
    double coverage = 0.0;
    Piaw width;
    bool empty_selection = false;
};

RunResult run_decomposed(const TimeSeries& series, const SplitSpec& split,
                         const MethodAssignment& assignment, const HyperParams& hp,
                         const StlConfig& stl = {}, DecompMode mode = DecompMode::Full);

/// Direct application of one conformal method to the raw series, same lag
/// construction and regressor as the decomposed pipeline.
RunResult run_raw_baseline(const TimeSeries& series, const SplitSpec& split, Method method,
                           double alpha, const HyperParams& hp);

} // namespace tscp
