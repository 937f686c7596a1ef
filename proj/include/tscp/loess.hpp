#pragma once

#include "tscp/types.hpp"

namespace tscp {

/// Local polynomial regression with tricube kernel weights over the `span`
/// nearest neighbours of each evaluation point.
struct LoessConfig {
    int span = 7;              // odd window width in points
    int degree = 1;            // local polynomial degree, 0..2
    std::optional<Vec> robustness_weights; // per-point multipliers in [0,1]
};

/// Fitted value of the local polynomial at an arbitrary abscissa x0.
double loess_fit_at(const Vec& xs, const Vec& ys, double x0, const LoessConfig& config);

/// Smooths ys at every xs position.
Vec loess_smooth(const Vec& xs, const Vec& ys, const LoessConfig& config);

/// Centered moving average; output length is length(ys) - window + 1.
Vec moving_average(const Vec& ys, int window);

/// Bisquare weights w = (1 - (|r| / (6 median|r|))^2)^2, clipped to zero at
/// and beyond the cutoff. All-zero residuals yield unit weights.
Vec bisquare_weights(const Vec& residuals);

} // namespace tscp
