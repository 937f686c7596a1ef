#include "tscp/regress.hpp"

#include <random>

namespace tscp {

LagMatrix build_lag_features(const Vec& values, int lag_order,
                             const std::optional<Mat>& features) {
    const Index n = values.size();
    if (lag_order < 1)
        throw Error(ErrorCode::BadArgument, "lag_order must be >= 1");
    if (n <= lag_order)
        throw Error(ErrorCode::SeriesTooShort, "not enough values for requested lag order");
    if (features && features->rows() != n)
        throw Error(ErrorCode::LengthMismatch, "feature rows do not match series length");

    const Index rows = n - lag_order;
    const Index exog = features ? features->cols() : 0;
    LagMatrix lm;
    lm.X.resize(rows, lag_order + exog);
    lm.y.resize(rows);
    lm.origin.resize(rows);
    for (Index r = 0; r < rows; ++r) {
        const Index t = r + lag_order;
        for (int k = 0; k < lag_order; ++k) lm.X(r, k) = values[t - lag_order + k];
        if (features) lm.X.block(r, lag_order, 1, exog) = features->row(t);
        lm.y[r] = values[t];
        lm.origin[r] = t;
    }
    return lm;
}

namespace {

LinearModel fit_weighted(const Mat& X, const Vec& y, const Vec& row_weights, double ridge) {
    const Index n = X.rows();
    const Index p = X.cols();
    if (ridge == 0.0 && n < p + 1)
        throw Error(ErrorCode::TooFewRows, "fewer rows than parameters and no ridge penalty");

    // Augmented design [X 1]; only the slope block is penalized.
    Mat ata(p + 1, p + 1);
    Vec atb(p + 1);
    const Vec w = row_weights.size() == n ? row_weights : Vec::Ones(n);
    Mat Xw = X.array().colwise() * w.array();
    ata.topLeftCorner(p, p) = Xw.transpose() * X;
    ata.topRightCorner(p, 1) = Xw.transpose() * Vec::Ones(n);
    ata.bottomLeftCorner(1, p) = ata.topRightCorner(p, 1).transpose();
    ata(p, p) = w.sum();
    atb.head(p) = Xw.transpose() * y;
    atb[p] = w.dot(y);
    for (Index j = 0; j < p; ++j) ata(j, j) += ridge;

    Vec beta;
    if (ridge == 0.0) {
        Eigen::ColPivHouseholderQR<Mat> qr(ata);
        if (qr.rank() < p + 1)
            throw Error(ErrorCode::SingularDesign, "design matrix is rank deficient");
        beta = qr.solve(atb);
    } else {
        beta = Eigen::LDLT<Mat>(ata).solve(atb);
    }
    LinearModel model;
    model.coefficients = beta.head(p);
    model.intercept = beta[p];
    model.ridge_penalty = ridge;
    return model;
}

} // namespace

LinearModel fit_linear(const LagMatrix& lm, double ridge_penalty) {
    return fit_weighted(lm.X, lm.y, Vec(), ridge_penalty);
}

double predict(const LinearModel& model, const Eigen::Ref<const Vec>& x) {
    if (x.size() != model.coefficients.size())
        throw Error(ErrorCode::DimensionMismatch, "feature dimension does not match model");
    return model.intercept + model.coefficients.dot(x);
}

DifferenceModel fit_difference_model(const Vec& values, int lag_order, double ridge_penalty) {
    const Index n = values.size();
    if (n < lag_order + 2)
        throw Error(ErrorCode::SeriesTooShort, "not enough values to difference and lag");
    Vec diffs = values.tail(n - 1) - values.head(n - 1);
    DifferenceModel dm;
    dm.model = fit_linear(build_lag_features(diffs, lag_order), ridge_penalty);
    dm.last_value = values[n - 1];
    dm.lag_order = lag_order;
    return dm;
}

double predict_undifferenced(const DifferenceModel& dm, const Eigen::Ref<const Vec>& recent_diffs,
                             double previous_value) {
    return previous_value + predict(dm.model, recent_diffs);
}

BootstrapEnsemble bootstrap_fit(const LagMatrix& lm, int ensemble_size, std::uint64_t seed,
                                double ridge_penalty) {
    if (ensemble_size < 2)
        throw Error(ErrorCode::BadArgument, "ensemble size must be >= 2");
    const Index n = lm.rows();
    if (n < 2)
        throw Error(ErrorCode::TooFewRows, "bootstrap needs at least two rows");

    std::mt19937_64 rng(seed);
    constexpr int kMaxRetries = 50;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        std::vector<std::vector<char>> in_bag(ensemble_size, std::vector<char>(n, 0));
        std::vector<Vec> counts(ensemble_size, Vec::Zero(n));
        for (int b = 0; b < ensemble_size; ++b) {
            for (Index i = 0; i < n; ++i) {
                const Index pick = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
                in_bag[b][pick] = 1;
                counts[b][pick] += 1.0;
            }
        }
        bool every_row_oob = true;
        for (Index i = 0; i < n && every_row_oob; ++i) {
            bool oob = false;
            for (int b = 0; b < ensemble_size; ++b)
                if (!in_bag[b][i]) { oob = true; break; }
            every_row_oob = oob;
        }
        if (!every_row_oob) continue;

        BootstrapEnsemble ens;
        ens.seed = seed;
        ens.in_bag = std::move(in_bag);
        ens.models.reserve(ensemble_size);
        for (int b = 0; b < ensemble_size; ++b)
            ens.models.push_back(fit_weighted(lm.X, lm.y, counts[b], ridge_penalty));
        return ens;
    }
    throw Error(ErrorCode::CoverageFailure,
                "some row was never out-of-bag after bounded resampling retries");
}

} // namespace tscp
