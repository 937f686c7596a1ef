#include "tscp/stl.hpp"

#include "tscp/loess.hpp"

#include <cmath>

namespace tscp {

int next_odd_at_least(double x) {
    int v = static_cast<int>(std::ceil(x));
    if (v < 3) v = 3;
    return v % 2 == 0 ? v + 1 : v;
}

namespace {

int capped_odd_span(int span, Index n) {
    if (span <= static_cast<int>(n)) return span;
    int v = static_cast<int>(n);
    return v % 2 == 0 ? v - 1 : v;
}

// Smooths one cycle-subseries and evaluates it at cycle numbers -1..m,
// extending the seasonal estimate one full period beyond each end.
Vec smooth_subseries(const Vec& sub, const Vec& rho_sub, int span, bool periodic) {
    const Index m = sub.size();
    Vec fitted(m + 2);
    const double rho_total = rho_sub.sum();
    if (periodic || m < 3) {
        const double mean = rho_total > 0.0 ? rho_sub.dot(sub) / rho_total : sub.mean();
        fitted.setConstant(mean);
        return fitted;
    }
    Vec xs(m);
    for (Index k = 0; k < m; ++k) xs[k] = static_cast<double>(k);
    LoessConfig cfg;
    cfg.span = capped_odd_span(span, m);
    cfg.degree = 1;
    if (rho_total > 0.0) cfg.robustness_weights = rho_sub;
    for (Index k = -1; k <= m; ++k)
        fitted[k + 1] = loess_fit_at(xs, sub, static_cast<double>(k), cfg);
    return fitted;
}

} // namespace

DecompositionResult stl_decompose(const TimeSeries& series, StlConfig config) {
    validate_series(series);
    const Index n = series.size();
    const int tau = series.period;
    if (n < 2 * static_cast<Index>(tau))
        throw Error(ErrorCode::SeriesTooShort, "stl needs at least two full periods");
    if (config.seasonal_span < 3 || config.seasonal_span % 2 == 0)
        throw Error(ErrorCode::BadArgument, "seasonal_span must be odd and >= 3");
    if (config.trend_span == 0)
        config.trend_span = next_odd_at_least(1.5 * tau / (1.0 - 1.5 / config.seasonal_span));
    if (config.lowpass_span == 0)
        config.lowpass_span = next_odd_at_least(static_cast<double>(tau));
    if (config.trend_span % 2 == 0 || config.lowpass_span % 2 == 0)
        throw Error(ErrorCode::BadArgument, "stl spans must be odd");
    config.trend_span = capped_odd_span(config.trend_span, n);
    config.lowpass_span = capped_odd_span(config.lowpass_span, n);

    const Vec& y = series.values;
    Vec xs(n);
    for (Index i = 0; i < n; ++i) xs[i] = static_cast<double>(i);

    Vec rho = Vec::Ones(n);
    Vec trend = Vec::Zero(n);
    Vec seasonal = Vec::Zero(n);

    const int passes = config.robust ? 1 + config.outer_iterations : 1;
    for (int pass = 0; pass < passes; ++pass) {
        for (int iter = 0; iter < config.inner_iterations; ++iter) {
            Vec detrended = y - trend;

            // Cycle-subseries smoothing; ext spans time offsets -tau..n+tau-1.
            Vec ext(n + 2 * tau);
            for (int p = 0; p < tau; ++p) {
                const Index m = (n - 1 - p) / tau + 1;
                Vec sub(m), rho_sub(m);
                for (Index k = 0; k < m; ++k) {
                    sub[k] = detrended[p + k * tau];
                    rho_sub[k] = rho[p + k * tau];
                }
                Vec fitted = smooth_subseries(sub, rho_sub, config.seasonal_span, config.periodic);
                for (Index k = -1; k <= m; ++k)
                    ext[tau + p + k * tau] = fitted[k + 1];
            }

            // Low-pass: MA(tau) twice, MA(3), then a lowpass-span LOESS.
            Vec low = moving_average(moving_average(moving_average(ext, tau), tau), 3);
            LoessConfig low_cfg;
            low_cfg.span = config.lowpass_span;
            low_cfg.degree = 1;
            low = loess_smooth(xs, low, low_cfg);

            for (Index i = 0; i < n; ++i) seasonal[i] = ext[i + tau] - low[i];

            Vec deseason = y - seasonal;
            LoessConfig trend_cfg;
            trend_cfg.span = config.trend_span;
            trend_cfg.degree = 1;
            trend_cfg.robustness_weights = rho;
            trend = loess_smooth(xs, deseason, trend_cfg);
        }
        if (pass + 1 < passes) rho = bisquare_weights(y - trend - seasonal);
    }

    DecompositionResult out;
    out.trend = std::move(trend);
    out.seasonal = std::move(seasonal);
    out.remainder = y - out.trend - out.seasonal;
    return out;
}

} // namespace tscp
