#pragma once

#include "tscp/types.hpp"

namespace tscp {

/// Tuning parameters for the seasonal-trend decomposition. Spans of 0 are
/// replaced by period-derived defaults: trend_span is the smallest odd
/// integer >= 1.5 tau / (1 - 1.5 / seasonal_span) and lowpass_span the
/// smallest odd integer >= tau.
struct StlConfig {
    int seasonal_span = 7;
    int trend_span = 0;
    int lowpass_span = 0;
    int inner_iterations = 2;
    int outer_iterations = 1;
    bool robust = false;
    // Replaces cycle-subseries smoothing by the subseries mean, forcing a
    // strictly periodic seasonal component.
    bool periodic = false;
};

int next_odd_at_least(double x);

/// Inner/outer-loop decomposition into trend + seasonal + remainder. The
/// remainder is defined as values - trend - seasonal, so reconstruction is
/// exact by construction.
DecompositionResult stl_decompose(const TimeSeries& series, StlConfig config = {});

} // namespace tscp
