#include "tscp/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tscp {

Vec residual_scores(const Vec& predictions, const Vec& actuals) {
    if (predictions.size() != actuals.size())
        throw Error(ErrorCode::LengthMismatch, "prediction and actual lengths differ");
    return (predictions - actuals).cwiseAbs();
}

Vec normalize_weights(const Vec& raw) {
    if (raw.size() < 1)
        throw Error(ErrorCode::BadArgument, "weight vector is empty");
    if (raw.minCoeff() < 0.0)
        throw Error(ErrorCode::BadArgument, "weights must be nonnegative");
    const double total = raw.sum();
    if (total <= 0.0)
        throw Error(ErrorCode::AllZeroWeights, "raw weights sum to zero");
    return raw / total;
}

WeightedScoreSet make_weighted_scores(Vec scores, const Vec& raw_weights) {
    if (raw_weights.size() != scores.size() + 1)
        throw Error(ErrorCode::LengthMismatch, "need one weight per score plus the test mass");
    for (Index i = 0; i < scores.size(); ++i)
        if (!std::isfinite(scores[i]) || scores[i] < 0.0)
            throw Error(ErrorCode::BadArgument, "scores must be finite and nonnegative");
    WeightedScoreSet wss;
    wss.scores = std::move(scores);
    wss.weights = normalize_weights(raw_weights);
    return wss;
}

double weighted_quantile(const WeightedScoreSet& wss, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw Error(ErrorCode::BadArgument, "quantile level must lie in (0,1)");
    const Index n = wss.scores.size();
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return wss.scores[a] < wss.scores[b]; });
    double cum = 0.0;
    for (Index r = 0; r < n; ++r) {
        cum += wss.weights[order[r]];
        // merge tied scores before testing the level
        if (r + 1 < n && wss.scores[order[r + 1]] == wss.scores[order[r]]) continue;
        // the tolerance absorbs accumulation round-off so uniform weights hit
        // the exact order-statistic ranks (e.g. nine additions of 1/10 fall
        // one ulp short of 0.9)
        if (cum >= level - 1e-12) return wss.scores[order[r]];
    }
    return kInf;
}

double conformal_quantile(const Vec& scores, double level) {
    const Index n = scores.size();
    if (n == 0)
        throw Error(ErrorCode::TooFewPoints, "no calibration scores");
    const Index rank = static_cast<Index>(std::ceil((n + 1) * level));
    if (rank > n) return kInf;
    std::vector<double> s(scores.data(), scores.data() + n);
    std::nth_element(s.begin(), s.begin() + (rank - 1), s.end());
    return s[rank - 1];
}

Interval split_cp_interval(const Vec& cal_scores, double alpha, double prediction) {
    const double q = conformal_quantile(cal_scores, 1.0 - alpha);
    return {prediction - q, prediction + q};
}

CvPlusModel cv_plus_fit(const LagMatrix& lm, int folds, double ridge_penalty) {
    const Index n = lm.rows();
    if (folds < 2)
        throw Error(ErrorCode::BadArgument, "cv+ needs at least two folds");
    if (n < folds)
        throw Error(ErrorCode::TooFewRows, "fewer rows than folds");

    CvPlusModel model;
    model.fold_of_row.resize(n);
    model.oof_residuals.resize(n);
    model.fold_models.reserve(folds);

    // Contiguous time blocks; fold k holds rows [k*n/K, (k+1)*n/K).
    for (int k = 0; k < folds; ++k) {
        const Index lo = n * k / folds;
        const Index hi = n * (k + 1) / folds;
        LagMatrix rest;
        rest.X.resize(n - (hi - lo), lm.cols());
        rest.y.resize(n - (hi - lo));
        Index r = 0;
        for (Index i = 0; i < n; ++i) {
            if (i >= lo && i < hi) continue;
            rest.X.row(r) = lm.X.row(i);
            rest.y[r] = lm.y[i];
            ++r;
        }
        LinearModel fitted = fit_linear(rest, ridge_penalty);
        for (Index i = lo; i < hi; ++i) {
            model.fold_of_row[i] = k;
            model.oof_residuals[i] = std::abs(lm.y[i] - predict(fitted, lm.X.row(i).transpose()));
        }
        model.fold_models.push_back(std::move(fitted));
    }
    return model;
}

Interval cv_plus_interval(const CvPlusModel& model, double alpha,
                          const Eigen::Ref<const Vec>& x_test) {
    const Index n = model.oof_residuals.size();
    Vec fold_pred(model.fold_models.size());
    for (size_t k = 0; k < model.fold_models.size(); ++k)
        fold_pred[static_cast<Index>(k)] = predict(model.fold_models[k], x_test);

    std::vector<double> lo_vals(n), hi_vals(n);
    for (Index i = 0; i < n; ++i) {
        const double p = fold_pred[model.fold_of_row[i]];
        lo_vals[i] = p - model.oof_residuals[i];
        hi_vals[i] = p + model.oof_residuals[i];
    }
    const Index lo_rank = static_cast<Index>(std::floor(alpha * (n + 1)));
    const Index hi_rank = static_cast<Index>(std::ceil((1.0 - alpha) * (n + 1)));
    Interval out;
    if (lo_rank < 1) {
        out.lower = -kInf;
    } else {
        std::nth_element(lo_vals.begin(), lo_vals.begin() + (lo_rank - 1), lo_vals.end());
        out.lower = lo_vals[lo_rank - 1];
    }
    if (hi_rank > n) {
        out.upper = kInf;
    } else {
        std::nth_element(hi_vals.begin(), hi_vals.begin() + (hi_rank - 1), hi_vals.end());
        out.upper = hi_vals[hi_rank - 1];
    }
    return out;
}

Interval cv_plus_interval(const LagMatrix& lm, int folds, double alpha,
                          const Eigen::Ref<const Vec>& x_test, double ridge_penalty) {
    return cv_plus_interval(cv_plus_fit(lm, folds, ridge_penalty), alpha, x_test);
}

} // namespace tscp
