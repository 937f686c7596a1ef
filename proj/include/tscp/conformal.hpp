#pragma once

#include "tscp/regress.hpp"
#include "tscp/types.hpp"

namespace tscp {

/// Absolute residuals |prediction - actual|.
Vec residual_scores(const Vec& predictions, const Vec& actuals);

/// n calibration scores with n+1 normalized weights; the trailing weight is
/// the test-point mass sitting at +infinity.
struct WeightedScoreSet {
    Vec scores;
    Vec weights;
};

/// Normalizes n+1 raw weights (test mass last) to sum to one.
Vec normalize_weights(const Vec& raw);

WeightedScoreSet make_weighted_scores(Vec scores, const Vec& raw_weights);

/// Smallest score whose cumulative weight reaches `level`; +infinity when
/// only the test mass completes it.
double weighted_quantile(const WeightedScoreSet& wss, double level);

/// Uniform-weight conformal quantile over n scores, i.e. the
/// ceil((n+1) level)-th order statistic (or +infinity past n).
double conformal_quantile(const Vec& scores, double level);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    double width() const { return upper - lower; }
    bool covers(double y) const { return lower <= y && y <= upper; }
};

Interval split_cp_interval(const Vec& cal_scores, double alpha, double prediction);

/// K contiguous-fold cross-conformal state: per-fold models plus out-of-fold
/// absolute residuals for every row.
struct CvPlusModel {
    std::vector<LinearModel> fold_models;
    std::vector<int> fold_of_row;
    Vec oof_residuals;
};

CvPlusModel cv_plus_fit(const LagMatrix& lm, int folds, double ridge_penalty);

Interval cv_plus_interval(const CvPlusModel& model, double alpha,
                          const Eigen::Ref<const Vec>& x_test);

/// Convenience one-shot form.
Interval cv_plus_interval(const LagMatrix& lm, int folds, double alpha,
                          const Eigen::Ref<const Vec>& x_test, double ridge_penalty);

} // namespace tscp
