#include "tscp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tscp {

int circular_position_distance(int a, int b, int tau) {
    const int d = std::abs(a - b);
    return std::min(d, tau - d);
}

namespace {

void check_ctx(const SeasonContext& ctx) {
    if (ctx.tau < 1)
        throw Error(ErrorCode::BadArgument, "period must be positive");
    if (ctx.test_position < 0 || ctx.test_position >= ctx.tau)
        throw Error(ErrorCode::BadArgument, "test position outside {0,...,tau-1}");
    for (int p : ctx.cal_positions)
        if (p < 0 || p >= ctx.tau)
            throw Error(ErrorCode::BadArgument, "calibration position outside {0,...,tau-1}");
}

Mat scaled_features(const Mat& cal, bool standardize, Vec* scale_out) {
    Vec scale = Vec::Ones(cal.cols());
    if (standardize && cal.rows() > 1) {
        for (Index j = 0; j < cal.cols(); ++j) {
            const double mean = cal.col(j).mean();
            const double var = (cal.col(j).array() - mean).square().sum() / (cal.rows() - 1);
            if (var > 0.0) scale[j] = 1.0 / std::sqrt(var);
        }
    }
    *scale_out = scale;
    return cal.array().rowwise() * scale.transpose().array();
}

Vec feature_distances(const Mat& cal_features, const Eigen::Ref<const Vec>& test_features,
                      bool standardize) {
    if (cal_features.cols() != test_features.size())
        throw Error(ErrorCode::DimensionMismatch, "feature dimensions differ");
    Vec scale;
    Mat scaled = scaled_features(cal_features, standardize, &scale);
    Vec test_scaled = test_features.cwiseProduct(scale);
    Vec d(scaled.rows());
    for (Index i = 0; i < scaled.rows(); ++i)
        d[i] = (scaled.row(i).transpose() - test_scaled).norm();
    return d;
}

} // namespace

Vec binary_point_weights(const SeasonContext& ctx) {
    check_ctx(ctx);
    Vec w = Vec::Zero(ctx.size());
    for (Index i = 0; i < ctx.size(); ++i)
        if (ctx.cal_positions[i] == ctx.test_position) w[i] = 1.0;
    return w;
}

Vec binary_local_weights(const SeasonContext& ctx, int k, bool circular) {
    check_ctx(ctx);
    if (k < 0 || 2 * k >= ctx.tau)
        throw Error(ErrorCode::NeighborhoodTooLarge, "need 0 <= k < tau/2");
    Vec w = Vec::Zero(ctx.size());
    for (Index i = 0; i < ctx.size(); ++i) {
        const int d = circular
                          ? circular_position_distance(ctx.cal_positions[i], ctx.test_position, ctx.tau)
                          : std::abs(ctx.cal_positions[i] - ctx.test_position);
        if (d <= k) w[i] = 1.0;
    }
    return w;
}

Vec exp_local_weights(const SeasonContext& ctx, double lambda, bool circular) {
    check_ctx(ctx);
    if (!(lambda > 0.0 && lambda < 1.0))
        throw Error(ErrorCode::BadArgument, "decay rate must lie in (0,1)");
    Vec w(ctx.size());
    for (Index i = 0; i < ctx.size(); ++i) {
        const int d = circular
                          ? circular_position_distance(ctx.cal_positions[i], ctx.test_position, ctx.tau)
                          : std::abs(ctx.cal_positions[i] - ctx.test_position);
        w[i] = lambda * std::exp(-lambda * d);
    }
    return w;
}

double default_decay(int tau) {
    return std::min(0.99, 2.0 * std::log(100.0) / tau);
}

Vec recency_filter(Vec raw_weights, int tau, int keep_periods) {
    if (keep_periods < 1)
        throw Error(ErrorCode::BadArgument, "keep_periods must be >= 1");
    const Index n = raw_weights.size();
    const Index cutoff = n - static_cast<Index>(keep_periods) * tau; // drop i <= cutoff (1-based)
    for (Index i = 0; i < std::min(cutoff, n); ++i) raw_weights[i] = 0.0;
    return raw_weights;
}

bool empty_selection(const Vec& raw_weights) {
    return raw_weights.size() == 0 || raw_weights.maxCoeff() <= 0.0;
}

Vec knn_weights(const Mat& cal_features, const Eigen::Ref<const Vec>& test_features, int k,
                bool standardize) {
    const Index n = cal_features.rows();
    if (k < 1 || k > n)
        throw Error(ErrorCode::BadArgument, "knn k must lie in [1, n]");
    Vec d = feature_distances(cal_features, test_features, standardize);
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return d[a] != d[b] ? d[a] < d[b] : a < b;
    });
    Vec w = Vec::Zero(n);
    for (int i = 0; i < k; ++i) w[order[i]] = 1.0;
    return w;
}

Vec feat_dist_weights(const Mat& cal_features, const Eigen::Ref<const Vec>& test_features,
                      bool standardize) {
    Vec d = feature_distances(cal_features, test_features, standardize);
    const Index n = d.size();
    Vec w(n);
    double max_recip = 0.0;
    for (Index i = 0; i < n; ++i)
        if (d[i] > 0.0) max_recip = std::max(max_recip, 1.0 / d[i]);
    for (Index i = 0; i < n; ++i) {
        if (d[i] > 0.0)
            w[i] = 1.0 / d[i];
        else
            w[i] = max_recip > 0.0 ? 10.0 * max_recip : 1.0;
    }
    return w;
}

} // namespace tscp
