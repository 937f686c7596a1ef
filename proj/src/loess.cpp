#include "tscp/loess.hpp"

#include <algorithm>
#include <cmath>

namespace tscp {

namespace {

double tricube(double u) {
    if (u >= 1.0) return 0.0;
    const double t = 1.0 - u * u * u;
    return t * t * t;
}

// Indices [lo, lo+span) of the span nearest neighbours of x0 in sorted xs.
Index window_start(const Vec& xs, double x0, int span) {
    const Index n = xs.size();
    Index lo = std::lower_bound(xs.data(), xs.data() + n, x0) - xs.data();
    Index hi = lo; // window is [lo, hi)
    while (hi - lo < span) {
        if (lo == 0) { ++hi; continue; }
        if (hi == n) { --lo; continue; }
        if (x0 - xs[lo - 1] <= xs[hi] - x0) --lo; else ++hi;
    }
    return lo;
}

} // namespace

double loess_fit_at(const Vec& xs, const Vec& ys, double x0, const LoessConfig& config) {
    const Index n = xs.size();
    if (n != ys.size())
        throw Error(ErrorCode::LengthMismatch, "loess input lengths differ");
    if (n < config.span)
        throw Error(ErrorCode::TooFewPoints, "loess span exceeds point count");
    if (config.degree < 0 || config.degree > 2)
        throw Error(ErrorCode::BadArgument, "loess degree must be 0, 1 or 2");
    if (config.robustness_weights && config.robustness_weights->size() != n)
        throw Error(ErrorCode::LengthMismatch, "robustness weight length differs from input");

    const Index lo = window_start(xs, x0, config.span);
    const Index hi = lo + config.span;

    double h = 0.0;
    for (Index i = lo; i < hi; ++i) h = std::max(h, std::abs(xs[i] - x0));

    Vec w(config.span);
    double wsum = 0.0;
    for (Index i = lo; i < hi; ++i) {
        double wi = h > 0.0 ? tricube(std::abs(xs[i] - x0) / h) : 1.0;
        if (config.robustness_weights) wi *= (*config.robustness_weights)[i];
        w[i - lo] = wi;
        wsum += wi;
    }

    auto window_mean = [&]() {
        if (wsum > 0.0) {
            double acc = 0.0;
            for (Index i = lo; i < hi; ++i) acc += w[i - lo] * ys[i];
            return acc / wsum;
        }
        return ys.segment(lo, config.span).mean();
    };

    if (wsum <= 0.0 || config.degree == 0 || h == 0.0) return window_mean();

    const int p = config.degree + 1;
    Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd atb = Eigen::VectorXd::Zero(p);
    for (Index i = lo; i < hi; ++i) {
        const double d = xs[i] - x0;
        double basis[3] = {1.0, d, d * d};
        for (int r = 0; r < p; ++r) {
            for (int c = 0; c < p; ++c) ata(r, c) += w[i - lo] * basis[r] * basis[c];
            atb[r] += w[i - lo] * basis[r] * ys[i];
        }
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(ata);
    if (ldlt.info() != Eigen::Success) return window_mean();
    Eigen::VectorXd beta = ldlt.solve(atb);
    if (!beta.allFinite()) return window_mean();
    // Degenerate windows (effective rank < p) solve to garbage without an
    // explicit LDLT failure; reject via the residual of the normal equations.
    if ((ata * beta - atb).cwiseAbs().maxCoeff() >
        1e-8 * (1.0 + atb.cwiseAbs().maxCoeff()))
        return window_mean();
    return beta[0];
}

Vec loess_smooth(const Vec& xs, const Vec& ys, const LoessConfig& config) {
    Vec out(xs.size());
    for (Index i = 0; i < xs.size(); ++i) out[i] = loess_fit_at(xs, ys, xs[i], config);
    return out;
}

Vec moving_average(const Vec& ys, int window) {
    const Index n = ys.size();
    if (window < 1 || window > n)
        throw Error(ErrorCode::WindowTooLarge, "moving average window exceeds series length");
    Vec out(n - window + 1);
    double acc = ys.head(window).sum();
    out[0] = acc / window;
    for (Index i = 1; i < out.size(); ++i) {
        acc += ys[i + window - 1] - ys[i - 1];
        out[i] = acc / window;
    }
    return out;
}

Vec bisquare_weights(const Vec& residuals) {
    const Index n = residuals.size();
    if (n == 0)
        throw Error(ErrorCode::EmptySeries, "bisquare weights need residuals");
    Vec mags = residuals.cwiseAbs();
    std::vector<double> sorted(mags.data(), mags.data() + n);
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    double median = sorted[n / 2];
    if (n % 2 == 0) {
        double below = *std::max_element(sorted.begin(), sorted.begin() + n / 2);
        median = 0.5 * (median + below);
    }
    Vec w(n);
    if (median == 0.0) {
        w.setOnes();
        return w;
    }
    const double cutoff = 6.0 * median;
    for (Index i = 0; i < n; ++i) {
        const double u = mags[i] / cutoff;
        if (u >= 1.0) {
            w[i] = 0.0;
        } else {
            const double t = 1.0 - u * u;
            w[i] = t * t;
        }
    }
    return w;
}

} // namespace tscp
