#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "tscp/regress.hpp"
#include "tscp/synthetic.hpp"

using namespace tscp;

TEST_CASE("build_lag_features lays out lags oldest-first") {
    Vec v(6);
    v << 1, 2, 3, 4, 5, 6;
    LagMatrix lm = build_lag_features(v, 2);
    REQUIRE(lm.rows() == 4);
    REQUIRE(lm.cols() == 2);
    CHECK(lm.X(0, 0) == 1.0);
    CHECK(lm.X(0, 1) == 2.0);
    CHECK(lm.y[0] == 3.0);
    CHECK(lm.origin[0] == 2);
    CHECK(lm.y[3] == 6.0);
}

TEST_CASE("build_lag_features appends exogenous columns") {
    Vec v(5);
    v << 1, 2, 3, 4, 5;
    Mat f(5, 1);
    f << 10, 20, 30, 40, 50;
    LagMatrix lm = build_lag_features(v, 1, f);
    REQUIRE(lm.cols() == 2);
    CHECK(lm.X(0, 1) == 20.0); // feature row of the target step
}

TEST_CASE("fit_linear recovers an exact affine relationship") {
    Vec v(30);
    for (Index t = 0; t < 30; ++t) v[t] = 3.0 * (t + 1) + 2.0;
    LagMatrix lm = build_lag_features(v, 1);
    LinearModel m = fit_linear(lm, 0.0);
    // v_t = v_{t-1} + 3 exactly
    CHECK(m.coefficients[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.intercept == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("fit_linear agrees with an SVD pseudoinverse oracle") {
    GaussianRng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 60, p = 3;
        Mat X(n, p);
        Vec y(n);
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < p; ++j) X(i, j) = rng.normal();
            y[i] = 2.0 * X(i, 0) - X(i, 1) + 0.5 * X(i, 2) + 1.0 + 0.1 * rng.normal();
        }
        LagMatrix lm{X, y, {}};
        LinearModel m = fit_linear(lm, 0.0);

        // oracle: least squares on [X 1] via SVD
        Mat aug(n, p + 1);
        aug.leftCols(p) = X;
        aug.col(p).setOnes();
        Vec beta = aug.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
        for (Index j = 0; j < p; ++j)
            CHECK(m.coefficients[j] == doctest::Approx(beta[j]).epsilon(1e-6));
        CHECK(m.intercept == doctest::Approx(beta[p]).epsilon(1e-6));
    }
}

TEST_CASE("rank-deficient OLS throws, ridge resolves it") {
    Mat X(10, 2);
    for (Index i = 0; i < 10; ++i) {
        X(i, 0) = static_cast<double>(i);
        X(i, 1) = 2.0 * i; // exact collinearity
    }
    Vec y = X.col(0);
    LagMatrix lm{X, y, {}};
    CHECK_THROWS_AS(fit_linear(lm, 0.0), Error);
    CHECK_NOTHROW(fit_linear(lm, 1e-6));
}

TEST_CASE("one-step trend predictions land within 0.05 of truth") {
    // synthetic trend component: 0.1 t
    Vec trend(500);
    for (Index t = 0; t < 500; ++t) trend[t] = 0.1 * (t + 1);
    LagMatrix lm = build_lag_features(trend.head(400), 1);
    LinearModel m = fit_linear(lm, 1e-6);
    for (Index t = 400; t < 500; ++t) {
        Vec x(1);
        x << trend[t - 1];
        CHECK(std::abs(predict(m, x) - trend[t]) < 0.05);
    }
}

TEST_CASE("difference model reconstructs a linear ramp exactly") {
    Vec v(50);
    for (Index t = 0; t < 50; ++t) v[t] = 4.0 + 0.25 * t;
    // differences are constant, so the design needs the ridge path
    DifferenceModel dm = fit_difference_model(v, 1, 1e-6);
    Vec recent(1);
    recent << 0.25;
    CHECK(predict_undifferenced(dm, recent, v[49]) == doctest::Approx(v[49] + 0.25).epsilon(1e-9));
}

TEST_CASE("bootstrap ensembles are deterministic per seed and fully out-of-bag") {
    TimeSeries s = generate_synthetic(300, 2);
    LagMatrix lm = build_lag_features(s.values, 1);
    BootstrapEnsemble a = bootstrap_fit(lm, 20, 42, 1e-6);
    BootstrapEnsemble b = bootstrap_fit(lm, 20, 42, 1e-6);
    BootstrapEnsemble c = bootstrap_fit(lm, 20, 43, 1e-6);
    REQUIRE(a.size() == 20);
    CHECK(a.models[0].coefficients == b.models[0].coefficients);
    bool differs = false;
    for (int m = 0; m < a.size() && !differs; ++m)
        differs = a.in_bag[m] != c.in_bag[m];
    CHECK(differs);

    // every row must be out-of-bag for at least one member
    for (Index i = 0; i < lm.rows(); ++i) {
        bool oob = false;
        for (int m = 0; m < a.size(); ++m) oob |= !a.in_bag[m][i];
        CHECK(oob);
    }
}

TEST_CASE("out-of-bag fraction is near 1/e") {
    TimeSeries s = generate_synthetic(1000, 4);
    LagMatrix lm = build_lag_features(s.values, 1);
    BootstrapEnsemble ens = bootstrap_fit(lm, 50, 7, 1e-6);
    double oob = 0.0;
    for (int m = 0; m < ens.size(); ++m)
        for (Index i = 0; i < lm.rows(); ++i) oob += !ens.in_bag[m][i];
    oob /= static_cast<double>(ens.size()) * lm.rows();
    CHECK(oob == doctest::Approx(std::exp(-1.0)).epsilon(0.05));
}
