#pragma once

#include "tscp/types.hpp"

namespace tscp {

struct SequentialResult {
    IntervalSeries intervals; // one entry per test step
    Vec predictions;
};

/// Ensemble batch prediction intervals on a single series. Values before
/// `train_len` fit the bootstrap ensemble and seed the leave-one-out score
/// window; the rest are consumed one observation per step, each new score
/// replacing the oldest. Optional features rows align with `values`.
SequentialResult enbpi_run(const Vec& values, Index train_len, int lag_order, int ensemble_size,
                           double alpha, std::uint64_t seed, double ridge_penalty,
                           const std::optional<Mat>& features = {});

struct AciState {
    double alpha_t = 0.0;
    double alpha_target = 0.0;
    double gamma = 0.0;
};

/// alpha_{t+1} = alpha_t + gamma (alpha_target - 1[miscovered]).
void aci_step(AciState& state, bool covered);

struct AciResult {
    IntervalSeries intervals;
    Vec predictions;
    Vec alpha_trace;   // alpha_t used at each step (pre-update)
    int miscoverages = 0;
};

/// Adaptive conformal inference with a fixed calibration score set.
/// alpha_t <= 0 emits an infinite interval (counts covered); alpha_t >= 1
/// emits the bare point prediction.
AciResult aci_run(const Vec& cal_scores, const Vec& test_predictions, const Vec& test_actuals,
                  double alpha, double gamma);

} // namespace tscp
