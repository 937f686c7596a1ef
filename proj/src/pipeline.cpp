#include "tscp/pipeline.hpp"

#include "tscp/conformal.hpp"
#include "tscp/regress.hpp"
#include "tscp/sequential.hpp"
#include "tscp/weights.hpp"

#include <algorithm>
#include <cmath>

namespace tscp {

IntervalSeries recompose_intervals(const IntervalSeries& trend, const IntervalSeries& seasonal,
                                   const IntervalSeries& remainder) {
    const Index n = trend.size();
    if (seasonal.size() != n || remainder.size() != n)
        throw Error(ErrorCode::LengthMismatch, "component interval lengths differ");
    IntervalSeries out;
    out.component = Component::Recomposed;
    out.lower = trend.lower + seasonal.lower + remainder.lower;
    out.upper = trend.upper + seasonal.upper + remainder.upper;
    return out;
}

double bonferroni_alpha(double alpha, int components) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(ErrorCode::BadArgument, "alpha must lie in (0,1)");
    if (components < 1)
        throw Error(ErrorCode::BadArgument, "component count must be positive");
    return alpha / components;
}

namespace {

std::uint64_t component_seed(std::uint64_t base, Component c) {
    switch (c) {
    case Component::Trend: return base + 1;
    case Component::Seasonal: return base + 2;
    case Component::Remainder: return base + 3;
    default: return base;
    }
}

Vec lag_vector(const Vec& values, const std::optional<Mat>& features, Index t, int lag_order) {
    const Index exog = features ? features->cols() : 0;
    Vec x(lag_order + exog);
    for (int k = 0; k < lag_order; ++k) x[k] = values[t - lag_order + k];
    if (features) x.tail(exog) = features->row(t).transpose();
    return x;
}

// Sequential one-step predictions over [from, to) with a fixed model.
Vec sequential_predictions(const LinearModel& model, const Vec& values,
                           const std::optional<Mat>& features, Index from, Index to,
                           int lag_order) {
    Vec preds(to - from);
    for (Index t = from; t < to; ++t)
        preds[t - from] = predict(model, lag_vector(values, features, t, lag_order));
    return preds;
}

struct SeriesTask {
    const Vec& values;
    const std::optional<Mat>& features; // exogenous covariates, raw baseline only
    SplitSpec split;
    int tau = 0;
    Component label = Component::Raw;
};

ComponentForecast run_method(const SeriesTask& task, Method method, double alpha,
                             const HyperParams& hp) {
    const Vec& values = task.values;
    const Index total = values.size();
    const Index test_len = total - task.split.cal_end;
    const int lag = hp.lag_order;

    ComponentForecast fc;
    fc.component = task.label;
    fc.method = method;
    fc.effective_alpha = alpha;
    fc.component_actuals = values.tail(test_len);

    switch (method) {
    case Method::EnbPI: {
        SequentialResult r = enbpi_run(values, task.split.cal_end, lag, hp.ensemble_size, alpha,
                                       component_seed(hp.seed, task.label), hp.ridge_penalty,
                                       task.features);
        fc.predictions = std::move(r.predictions);
        fc.intervals = std::move(r.intervals);
        break;
    }
    case Method::ACI: {
        std::optional<Mat> train_features;
        if (task.features) train_features = task.features->topRows(task.split.train_end);
        LinearModel model = fit_linear(
            build_lag_features(values.head(task.split.train_end), lag, train_features),
            hp.ridge_penalty);
        Vec cal_preds = sequential_predictions(model, values, task.features, task.split.train_end,
                                               task.split.cal_end, lag);
        Vec cal_scores = residual_scores(
            cal_preds, values.segment(task.split.train_end, task.split.cal_end - task.split.train_end));
        Vec test_preds =
            sequential_predictions(model, values, task.features, task.split.cal_end, total, lag);
        AciResult r = aci_run(cal_scores, test_preds, fc.component_actuals, alpha, hp.gamma);
        fc.predictions = std::move(r.predictions);
        fc.intervals = std::move(r.intervals);
        break;
    }
    case Method::CVPlus: {
        std::optional<Mat> fit_features;
        if (task.features) fit_features = task.features->topRows(task.split.cal_end);
        LagMatrix lm = build_lag_features(values.head(task.split.cal_end), lag, fit_features);
        CvPlusModel cvm = cv_plus_fit(lm, hp.cv_folds, hp.ridge_penalty);
        Vec lower(test_len), upper(test_len), preds(test_len);
        for (Index s = 0; s < test_len; ++s) {
            const Index t = task.split.cal_end + s;
            Vec x = lag_vector(values, task.features, t, lag);
            Interval iv = cv_plus_interval(cvm, alpha, x);
            lower[s] = iv.lower;
            upper[s] = iv.upper;
            double acc = 0.0;
            for (const auto& m : cvm.fold_models) acc += predict(m, x);
            preds[s] = acc / static_cast<double>(cvm.fold_models.size());
        }
        fc.predictions = std::move(preds);
        fc.intervals = make_intervals(std::move(lower), std::move(upper), task.label);
        break;
    }
    default: { // weighted seasonal schemes: split-CP scores, per-step weights
        LinearModel model = fit_linear(build_lag_features(values.head(task.split.train_end), lag),
                                       hp.ridge_penalty);
        const Index cal_len = task.split.cal_end - task.split.train_end;
        Vec cal_preds = sequential_predictions(model, values, {}, task.split.train_end,
                                               task.split.cal_end, lag);
        Vec cal_scores =
            residual_scores(cal_preds, values.segment(task.split.train_end, cal_len));

        SeasonContext ctx;
        ctx.tau = task.tau;
        ctx.cal_positions.resize(cal_len);
        for (Index i = 0; i < cal_len; ++i)
            ctx.cal_positions[i] = period_position(task.split.train_end + i + 1, task.tau);

        Mat cal_lag_features;
        const bool feature_based = method == Method::KNN || method == Method::FeatDistPoint;
        if (feature_based) {
            cal_lag_features.resize(cal_len, lag);
            for (Index i = 0; i < cal_len; ++i)
                cal_lag_features.row(i) =
                    lag_vector(values, {}, task.split.train_end + i, lag).transpose();
        }
        const double lambda = hp.decay > 0.0 ? hp.decay : default_decay(task.tau);
        const int knn_k = hp.knn_k > 0 ? std::min<int>(hp.knn_k, static_cast<int>(cal_len))
                                       : static_cast<int>(cal_len);

        Vec lower(test_len), upper(test_len), preds(test_len);
        for (Index s = 0; s < test_len; ++s) {
            const Index t = task.split.cal_end + s;
            Vec x = lag_vector(values, {}, t, lag);
            const double pred = predict(model, x);
            preds[s] = pred;
            ctx.test_position = period_position(t + 1, task.tau);

            Vec raw;
            double test_mass = 1.0;
            switch (method) {
            case Method::BinaryPoint:
                raw = binary_point_weights(ctx);
                break;
            case Method::BinaryLocal:
                raw = binary_local_weights(ctx, hp.neighborhood);
                break;
            case Method::ExpLocal:
                raw = exp_local_weights(ctx, lambda);
                test_mass = lambda;
                break;
            case Method::KNN:
                raw = knn_weights(cal_lag_features, x, knn_k);
                break;
            case Method::FeatDistPoint:
                raw = feat_dist_weights(cal_lag_features, x);
                test_mass = raw.maxCoeff();
                break;
            default:
                throw Error(ErrorCode::BadArgument, "unsupported method");
            }
            if (hp.recency_periods > 0) raw = recency_filter(raw, task.tau, hp.recency_periods);

            if (empty_selection(raw)) {
                fc.empty_selection = true;
                lower[s] = -kInf;
                upper[s] = kInf;
                continue;
            }
            Vec full(raw.size() + 1);
            full.head(raw.size()) = raw;
            full[raw.size()] = test_mass;
            const double q = weighted_quantile(make_weighted_scores(cal_scores, full), 1.0 - alpha);
            lower[s] = pred - q;
            upper[s] = pred + q;
        }
        fc.predictions = std::move(preds);
        fc.intervals = make_intervals(std::move(lower), std::move(upper), task.label);
        break;
    }
    }
    fc.intervals.component = task.label;
    return fc;
}

struct ComponentSeries {
    Vec trend;
    Vec seasonal;
    Vec remainder;
};

// Component (pseudo-)observations for every time step. Within the fitted
// range these are the decomposition outputs; over the test range the
// seasonal part repeats the per-position mean, the trend follows its own
// autoregressive model, and the remainder absorbs the residual so that
// trend + seasonal + remainder == values at every t.
ComponentSeries component_series_fit_once(const TimeSeries& series, const SplitSpec& split,
                                          const HyperParams& hp, const StlConfig& stl) {
    const Index total = series.size();
    const Index fit_len = split.cal_end;
    const int tau = series.period;

    TimeSeries head = make_series(series.values.head(fit_len), tau);
    DecompositionResult d = stl_decompose(head, stl);

    ComponentSeries cs;
    cs.trend.resize(total);
    cs.seasonal.resize(total);
    cs.remainder.resize(total);
    cs.trend.head(fit_len) = d.trend;
    cs.seasonal.head(fit_len) = d.seasonal;

    Vec pattern = Vec::Zero(tau);
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(tau);
    for (Index i = 0; i < fit_len; ++i) {
        const int p = period_position(i + 1, tau);
        pattern[p] += d.seasonal[i];
        counts[p] += 1;
    }
    for (int p = 0; p < tau; ++p)
        if (counts[p] > 0) pattern[p] /= counts[p];
    for (Index i = fit_len; i < total; ++i) cs.seasonal[i] = pattern[period_position(i + 1, tau)];

    LinearModel trend_model =
        fit_linear(build_lag_features(d.trend, hp.lag_order), hp.ridge_penalty);
    for (Index i = fit_len; i < total; ++i)
        cs.trend[i] = predict(trend_model, lag_vector(cs.trend, {}, i, hp.lag_order));

    cs.remainder = series.values - cs.trend - cs.seasonal;
    return cs;
}

ComponentSeries component_series_full(const TimeSeries& series, const StlConfig& stl) {
    DecompositionResult d = stl_decompose(series, stl);
    return {std::move(d.trend), std::move(d.seasonal), std::move(d.remainder)};
}

ComponentSeries component_series_refit(const TimeSeries& series, const SplitSpec& split,
                                       const StlConfig& stl) {
    const Index total = series.size();
    const Index fit_len = split.cal_end;
    const int tau = series.period;

    ComponentSeries cs;
    cs.trend.resize(total);
    cs.seasonal.resize(total);
    cs.remainder.resize(total);

    DecompositionResult d = stl_decompose(make_series(series.values.head(fit_len), tau), stl);
    cs.trend.head(fit_len) = d.trend;
    cs.seasonal.head(fit_len) = d.seasonal;

    for (Index t = fit_len; t < total; ++t) {
        DecompositionResult step =
            stl_decompose(make_series(series.values.head(t + 1), tau), stl);
        cs.trend[t] = step.trend[t];
        cs.seasonal[t] = step.seasonal[t];
    }
    cs.remainder = series.values - cs.trend - cs.seasonal;
    return cs;
}

} // namespace

RunResult run_decomposed(const TimeSeries& series, const SplitSpec& split,
                         const MethodAssignment& assignment, const HyperParams& hp,
                         const StlConfig& stl, DecompMode mode) {
    validate_series(series);
    validate_split(split, series.size());
    validate_assignment(assignment);
    validate_hyperparams(hp);

    ComponentSeries cs = mode == DecompMode::Full
                             ? component_series_full(series, stl)
                             : (mode == DecompMode::FitOnce
                                    ? component_series_fit_once(series, split, hp, stl)
                                    : component_series_refit(series, split, stl));

    const double component_alpha =
        assignment.bonferroni ? bonferroni_alpha(assignment.alpha) : assignment.alpha;
    const std::optional<Mat> no_features;

    RunResult out;
    out.components.push_back(
        run_method({cs.trend, no_features, split, series.period, Component::Trend},
                   assignment.trend_method, component_alpha, hp));
    out.components.push_back(
        run_method({cs.seasonal, no_features, split, series.period, Component::Seasonal},
                   assignment.season_method, component_alpha, hp));
    out.components.push_back(
        run_method({cs.remainder, no_features, split, series.period, Component::Remainder},
                   assignment.remainder_method, component_alpha, hp));

    out.intervals = recompose_intervals(out.components[0].intervals, out.components[1].intervals,
                                        out.components[2].intervals);
    out.predictions = out.components[0].predictions + out.components[1].predictions +
                      out.components[2].predictions;
    out.test_actuals = series.values.tail(series.size() - split.cal_end);
    out.coverage = picp(out.intervals, out.test_actuals);
    out.width = piaw(out.intervals);
    for (const auto& c : out.components) out.empty_selection |= c.empty_selection;
    return out;
}

RunResult run_raw_baseline(const TimeSeries& series, const SplitSpec& split, Method method,
                           double alpha, const HyperParams& hp) {
    validate_series(series, false);
    validate_split(split, series.size());
    validate_hyperparams(hp);
    if (method != Method::EnbPI && method != Method::ACI && method != Method::CVPlus)
        throw Error(ErrorCode::BadArgument, "raw baseline method must be enbpi, aci or cv_plus");

    RunResult out;
    ComponentForecast fc =
        run_method({series.values, series.features, split, std::max(series.period, 1),
                    Component::Raw},
                   method, alpha, hp);
    out.intervals = std::move(fc.intervals);
    out.predictions = std::move(fc.predictions);
    out.test_actuals = series.values.tail(series.size() - split.cal_end);
    out.coverage = picp(out.intervals, out.test_actuals);
    out.width = piaw(out.intervals);
    return out;
}

} // namespace tscp
