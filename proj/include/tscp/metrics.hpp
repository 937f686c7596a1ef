#pragma once

#include "tscp/types.hpp"

namespace tscp {

/// Empirical coverage fraction; interval membership is boundary-inclusive.
double picp(const IntervalSeries& intervals, const Vec& actuals);

struct Piaw {
    double value = 0.0;
    bool infinite = false;
};

/// Mean interval width; any infinite interval makes the result infinite
/// with the flag set.
Piaw piaw(const IntervalSeries& intervals);

} // namespace tscp
