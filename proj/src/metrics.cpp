#include "tscp/metrics.hpp"

#include <cmath>

namespace tscp {

double picp(const IntervalSeries& intervals, const Vec& actuals) {
    const Index n = intervals.size();
    if (n == 0)
        throw Error(ErrorCode::TooFewPoints, "picp needs at least one interval");
    if (actuals.size() != n)
        throw Error(ErrorCode::LengthMismatch, "interval and actual lengths differ");
    Index covered = 0;
    for (Index i = 0; i < n; ++i)
        if (intervals.lower[i] <= actuals[i] && actuals[i] <= intervals.upper[i]) ++covered;
    return static_cast<double>(covered) / n;
}

Piaw piaw(const IntervalSeries& intervals) {
    const Index n = intervals.size();
    if (n == 0)
        throw Error(ErrorCode::TooFewPoints, "piaw needs at least one interval");
    Piaw out;
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double w = intervals.upper[i] - intervals.lower[i];
        if (std::isinf(w)) {
            out.infinite = true;
            out.value = kInf;
            return out;
        }
        acc += w;
    }
    out.value = acc / n;
    return out;
}

} // namespace tscp
