#pragma once

#include <vector>

#include "tscp/types.hpp"

namespace tscp {

/// Period positions of the test sample and every calibration sample,
/// all in {0,...,tau-1}.
struct SeasonContext {
    int tau = 0;
    int test_position = 0;
    std::vector<int> cal_positions;

    Index size() const { return static_cast<Index>(cal_positions.size()); }
};

/// Wrap-around distance between two period positions.
int circular_position_distance(int a, int b, int tau);

/// Unit weight exactly at the test position's residue class, zero elsewhere.
/// May be all-zero (empty selection); callers surface that as an infinite
/// interval rather than an error.
Vec binary_point_weights(const SeasonContext& ctx);

/// Unit weight within position distance k of the test position. `circular`
/// toggles wrap-around (default) versus plain absolute distance.
Vec binary_local_weights(const SeasonContext& ctx, int k, bool circular = true);

/// lambda * exp(-lambda * position distance).
Vec exp_local_weights(const SeasonContext& ctx, double lambda, bool circular = true);

/// Decay rate such that a half-period separation shrinks the weight to ~1%.
double default_decay(int tau);

/// Zeroes the weights of all but the most recent keep_periods * tau samples
/// (1-based sample index i is dropped when i <= n - keep_periods * tau).
Vec recency_filter(Vec raw_weights, int tau, int keep_periods);

bool empty_selection(const Vec& raw_weights);

/// Unit weight for the k nearest calibration rows in Euclidean feature
/// distance, ties at the boundary broken by lower index. `standardize`
/// rescales each feature column by its calibration standard deviation first.
Vec knn_weights(const Mat& cal_features, const Eigen::Ref<const Vec>& test_features, int k,
                bool standardize = false);

/// Inverse-distance weights 1/d; zero distances receive ten times the
/// largest finite reciprocal so they dominate while staying normalizable.
Vec feat_dist_weights(const Mat& cal_features, const Eigen::Ref<const Vec>& test_features,
                      bool standardize = false);

} // namespace tscp
