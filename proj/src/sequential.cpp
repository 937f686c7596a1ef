#include "tscp/sequential.hpp"

#include "tscp/conformal.hpp"
#include "tscp/regress.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace tscp {

namespace {

// Rolling score window with O(log n) quantile lookup via a parallel sorted
// vector; capacity is fixed after construction.
class ScoreWindow {
public:
    explicit ScoreWindow(const Vec& initial)
        : fifo_(initial.data(), initial.data() + initial.size()),
          sorted_(fifo_.begin(), fifo_.end()) {
        std::sort(sorted_.begin(), sorted_.end());
    }

    void roll(double score) {
        const double oldest = fifo_.front();
        fifo_.pop_front();
        fifo_.push_back(score);
        sorted_.erase(std::lower_bound(sorted_.begin(), sorted_.end(), oldest));
        sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), score), score);
    }

    double quantile(double level) const {
        const Index n = static_cast<Index>(sorted_.size());
        const Index rank = static_cast<Index>(std::ceil((n + 1) * level));
        if (rank > n) return kInf;
        return sorted_[rank - 1];
    }

private:
    std::deque<double> fifo_;
    std::vector<double> sorted_;
};

} // namespace

SequentialResult enbpi_run(const Vec& values, Index train_len, int lag_order, int ensemble_size,
                           double alpha, std::uint64_t seed, double ridge_penalty,
                           const std::optional<Mat>& features) {
    const Index total = values.size();
    if (train_len <= lag_order + 1 || train_len >= total)
        throw Error(ErrorCode::SeriesTooShort, "enbpi needs warm-up data and a test range");

    std::optional<Mat> train_features;
    if (features) train_features = features->topRows(train_len);
    LagMatrix lm = build_lag_features(values.head(train_len), lag_order, train_features);
    BootstrapEnsemble ens = bootstrap_fit(lm, ensemble_size, seed, ridge_penalty);

    // Leave-one-out training scores: aggregate only members that skipped the row.
    const Index rows = lm.rows();
    Vec loo_scores(rows);
    for (Index i = 0; i < rows; ++i) {
        double acc = 0.0;
        int count = 0;
        for (int b = 0; b < ens.size(); ++b) {
            if (ens.in_bag[b][i]) continue;
            acc += predict(ens.models[b], lm.X.row(i).transpose());
            ++count;
        }
        loo_scores[i] = std::abs(lm.y[i] - acc / count);
    }

    ScoreWindow window(loo_scores);
    const Index steps = total - train_len;
    const Index exog = features ? features->cols() : 0;
    Vec lower(steps), upper(steps), preds(steps);
    Vec x(lag_order + exog);
    for (Index s = 0; s < steps; ++s) {
        const Index t = train_len + s;
        for (int k = 0; k < lag_order; ++k) x[k] = values[t - lag_order + k];
        if (features) x.tail(exog) = features->row(t).transpose();
        double pred = 0.0;
        for (int b = 0; b < ens.size(); ++b) pred += predict(ens.models[b], x);
        pred /= ens.size();
        const double q = window.quantile(1.0 - alpha);
        preds[s] = pred;
        lower[s] = pred - q;
        upper[s] = pred + q;
        window.roll(std::abs(values[t] - pred));
    }

    SequentialResult out;
    out.predictions = std::move(preds);
    out.intervals = make_intervals(std::move(lower), std::move(upper), Component::Raw);
    return out;
}

void aci_step(AciState& state, bool covered) {
    state.alpha_t += state.gamma * (state.alpha_target - (covered ? 0.0 : 1.0));
}

AciResult aci_run(const Vec& cal_scores, const Vec& test_predictions, const Vec& test_actuals,
                  double alpha, double gamma) {
    if (cal_scores.size() == 0)
        throw Error(ErrorCode::TooFewPoints, "aci needs calibration scores");
    if (test_predictions.size() != test_actuals.size())
        throw Error(ErrorCode::LengthMismatch, "test prediction and actual lengths differ");

    std::vector<double> sorted(cal_scores.data(), cal_scores.data() + cal_scores.size());
    std::sort(sorted.begin(), sorted.end());
    const Index n = static_cast<Index>(sorted.size());
    auto quantile_at = [&](double level) {
        const Index rank = static_cast<Index>(std::ceil((n + 1) * level));
        if (rank > n) return kInf;
        return sorted[rank - 1];
    };

    const Index steps = test_predictions.size();
    AciState state{alpha, alpha, gamma};
    AciResult out;
    out.alpha_trace.resize(steps);
    out.predictions = test_predictions;
    Vec lower(steps), upper(steps);
    for (Index s = 0; s < steps; ++s) {
        out.alpha_trace[s] = state.alpha_t;
        const double pred = test_predictions[s];
        bool covered;
        if (state.alpha_t <= 0.0) {
            lower[s] = -kInf;
            upper[s] = kInf;
            covered = true;
        } else if (state.alpha_t >= 1.0) {
            lower[s] = upper[s] = pred;
            covered = test_actuals[s] == pred;
        } else {
            const double q = quantile_at(1.0 - state.alpha_t);
            lower[s] = pred - q;
            upper[s] = pred + q;
            covered = lower[s] <= test_actuals[s] && test_actuals[s] <= upper[s];
        }
        if (!covered) ++out.miscoverages;
        aci_step(state, covered);
    }
    out.intervals = make_intervals(std::move(lower), std::move(upper), Component::Raw);
    return out;
}

} // namespace tscp
