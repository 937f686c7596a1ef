#pragma once

#include <cstdint>
#include <vector>

#include "tscp/types.hpp"

namespace tscp {

/// Design matrix for autoregressive fitting: row r predicts values[origin[r]]
/// from the lag_order previous values (plus exogenous columns, when given).
struct LagMatrix {
    Mat X;
    Vec y;
    std::vector<Index> origin; // 0-based time index of each target

    Index rows() const { return X.rows(); }
    Index cols() const { return X.cols(); }
};

LagMatrix build_lag_features(const Vec& values, int lag_order,
                             const std::optional<Mat>& features = {});

struct LinearModel {
    Vec coefficients;
    double intercept = 0.0;
    double ridge_penalty = 0.0;
};

/// Least squares with an unpenalized intercept; ridge_penalty > 0 shrinks the
/// slope coefficients. Throws SingularDesign for rank-deficient OLS.
LinearModel fit_linear(const LagMatrix& lm, double ridge_penalty);

double predict(const LinearModel& model, const Eigen::Ref<const Vec>& x);

/// Linear model trained on first differences; predictions are reconstructed
/// as previous value + predicted difference.
struct DifferenceModel {
    LinearModel model;
    double last_value = 0.0;
    int lag_order = 1;
};

DifferenceModel fit_difference_model(const Vec& values, int lag_order, double ridge_penalty);

/// One-step prediction of the undifferenced series given the lag_order most
/// recent differences and the previous observed value.
double predict_undifferenced(const DifferenceModel& dm, const Eigen::Ref<const Vec>& recent_diffs,
                             double previous_value);

struct BootstrapEnsemble {
    std::vector<LinearModel> models;
    std::vector<std::vector<char>> in_bag; // [member][row]
    std::uint64_t seed = 0;

    int size() const { return static_cast<int>(models.size()); }
};

/// Fits B models on with-replacement row resamples. Resampling is retried
/// (bounded) until every row is out-of-bag for at least one member.
BootstrapEnsemble bootstrap_fit(const LagMatrix& lm, int ensemble_size, std::uint64_t seed,
                                double ridge_penalty);

} // namespace tscp
