#include "tscp/types.hpp"

#include <cmath>

namespace tscp {

TimeSeries make_series(Vec values, int period, std::optional<Mat> features) {
    TimeSeries s;
    s.time_index.setLinSpaced(values.size(), 1, static_cast<int>(values.size()));
    s.values = std::move(values);
    s.period = period;
    s.features = std::move(features);
    return s;
}

const TimeSeries& validate_series(const TimeSeries& series, bool need_decomposition) {
    const Index total = series.values.size();
    if (total == 0)
        throw Error(ErrorCode::EmptySeries, "time series is empty");
    if (series.time_index.size() != total)
        throw Error(ErrorCode::LengthMismatch, "time_index length does not match values");
    if (series.features && series.features->rows() != total)
        throw Error(ErrorCode::LengthMismatch, "feature matrix row count does not match values");
    if (need_decomposition) {
        if (series.period < 2)
            throw Error(ErrorCode::BadArgument, "period must be at least 2");
        if (2 * static_cast<Index>(series.period) > total)
            throw Error(ErrorCode::PeriodTooLarge, "period exceeds half the series length");
    }
    return series;
}

SplitSpec default_split(Index total) {
    SplitSpec split;
    split.train_end = total / 2;
    split.cal_end = split.train_end + total / 4;
    return split;
}

void validate_split(const SplitSpec& split, Index total) {
    if (!(1 <= split.train_end && split.train_end < split.cal_end && split.cal_end < total))
        throw Error(ErrorCode::BadArgument, "split must satisfy 1 <= train_end < cal_end < T");
}

std::string component_name(Component c) {
    switch (c) {
    case Component::Trend: return "trend";
    case Component::Seasonal: return "seasonal";
    case Component::Remainder: return "remainder";
    case Component::Recomposed: return "recomposed";
    case Component::Raw: return "raw";
    }
    return "unknown";
}

bool IntervalSeries::has_infinite() const {
    for (Index i = 0; i < lower.size(); ++i)
        if (std::isinf(lower[i]) || std::isinf(upper[i])) return true;
    return false;
}

IntervalSeries make_intervals(Vec lower, Vec upper, Component component) {
    if (lower.size() != upper.size())
        throw Error(ErrorCode::LengthMismatch, "interval bound lengths differ");
    for (Index i = 0; i < lower.size(); ++i)
        if (lower[i] > upper[i])
            throw Error(ErrorCode::BadArgument, "interval has lower > upper");
    IntervalSeries out;
    out.lower = std::move(lower);
    out.upper = std::move(upper);
    out.component = component;
    return out;
}

std::string method_name(Method m) {
    switch (m) {
    case Method::EnbPI: return "enbpi";
    case Method::ACI: return "aci";
    case Method::CVPlus: return "cv_plus";
    case Method::BinaryPoint: return "binary_point";
    case Method::BinaryLocal: return "binary_local";
    case Method::ExpLocal: return "exp_local";
    case Method::KNN: return "knn";
    case Method::FeatDistPoint: return "feat_dist";
    }
    return "unknown";
}

Method method_from_name(const std::string& name) {
    if (name == "enbpi") return Method::EnbPI;
    if (name == "aci") return Method::ACI;
    if (name == "cv_plus") return Method::CVPlus;
    if (name == "binary_point") return Method::BinaryPoint;
    if (name == "binary_local") return Method::BinaryLocal;
    if (name == "exp_local") return Method::ExpLocal;
    if (name == "knn") return Method::KNN;
    if (name == "feat_dist") return Method::FeatDistPoint;
    throw Error(ErrorCode::ConfigError, "unknown method name: " + name);
}

void validate_assignment(const MethodAssignment& a) {
    if (!(a.alpha > 0.0 && a.alpha < 1.0))
        throw Error(ErrorCode::BadArgument, "alpha must lie in (0,1)");
    if (a.trend_method != Method::EnbPI && a.trend_method != Method::ACI)
        throw Error(ErrorCode::BadArgument, "trend method must be enbpi or aci");
    if (a.remainder_method != Method::EnbPI && a.remainder_method != Method::ACI &&
        a.remainder_method != Method::CVPlus)
        throw Error(ErrorCode::BadArgument, "remainder method must be enbpi, aci or cv_plus");
}

void validate_hyperparams(const HyperParams& hp) {
    if (hp.gamma < 0.0) throw Error(ErrorCode::BadArgument, "gamma must be nonnegative");
    if (hp.ensemble_size < 2) throw Error(ErrorCode::BadArgument, "ensemble_size must be >= 2");
    if (hp.cv_folds < 2) throw Error(ErrorCode::BadArgument, "cv_folds must be >= 2");
    if (hp.neighborhood < 0) throw Error(ErrorCode::BadArgument, "neighborhood must be >= 0");
    if (hp.decay < 0.0 || hp.decay >= 1.0)
        throw Error(ErrorCode::BadArgument, "decay must lie in [0,1)");
    if (hp.lag_order < 1) throw Error(ErrorCode::BadArgument, "lag_order must be >= 1");
    if (hp.ridge_penalty < 0.0) throw Error(ErrorCode::BadArgument, "ridge_penalty must be >= 0");
    if (hp.recency_periods < 0) throw Error(ErrorCode::BadArgument, "recency_periods must be >= 0");
}

} // namespace tscp
