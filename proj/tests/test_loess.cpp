#include <doctest.h>

#include <cmath>

#include "tscp/loess.hpp"
#include "tscp/synthetic.hpp"

using namespace tscp;

namespace {

Vec linspace(Index n) {
    Vec x(n);
    for (Index i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);
    return x;
}

} // namespace

TEST_CASE("degree-1 loess reproduces affine inputs exactly") {
    const Vec xs = linspace(40);
    const Vec ys = 2.0 * xs.array() + 1.0;
    for (int span : {5, 7, 21, 39}) {
        LoessConfig cfg;
        cfg.span = span;
        Vec fit = loess_smooth(xs, ys, cfg);
        CHECK((fit - ys).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("loess is the identity on constants") {
    const Vec xs = linspace(25);
    const Vec ys = Vec::Constant(25, 5.0);
    for (int degree : {0, 1, 2}) {
        LoessConfig cfg;
        cfg.span = 7;
        cfg.degree = degree;
        Vec fit = loess_smooth(xs, ys, cfg);
        CHECK((fit.array() - 5.0).abs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("loess smoothing reduces noise on a sine wave") {
    const Index n = 200;
    const Vec xs = linspace(n);
    Vec clean(n), noisy(n);
    GaussianRng rng(3);
    for (Index i = 0; i < n; ++i) {
        clean[i] = std::sin(2.0 * M_PI * xs[i] / 50.0);
        noisy[i] = clean[i] + 0.3 * rng.normal();
    }
    LoessConfig cfg;
    cfg.span = 31;
    Vec fit = loess_smooth(xs, noisy, cfg);
    const double rmse_fit = std::sqrt((fit - clean).squaredNorm() / n);
    const double rmse_noisy = std::sqrt((noisy - clean).squaredNorm() / n);
    CHECK(rmse_fit < rmse_noisy);
}

TEST_CASE("loess rejects windows larger than the data") {
    const Vec xs = linspace(5);
    LoessConfig cfg;
    cfg.span = 7;
    CHECK_THROWS_AS(loess_smooth(xs, xs, cfg), Error);
}

TEST_CASE("robustness weights bias the fit toward trusted points") {
    const Vec xs = linspace(9);
    Vec ys = 2.0 * xs.array() + 1.0;
    ys[4] += 100.0; // outlier
    LoessConfig cfg;
    cfg.span = 9;
    Vec w = Vec::Ones(9);
    w[4] = 0.0;
    cfg.robustness_weights = w;
    Vec fit = loess_smooth(xs, ys, cfg);
    // with the outlier zero-weighted the affine signal is recovered
    CHECK(std::abs(fit[4] - (2.0 * xs[4] + 1.0)) < 1e-9);
}

TEST_CASE("moving_average arithmetic") {
    Vec a(4);
    a << 1, 2, 3, 4;
    Vec m = moving_average(a, 2);
    REQUIRE(m.size() == 3);
    CHECK(m[0] == doctest::Approx(1.5));
    CHECK(m[1] == doctest::Approx(2.5));
    CHECK(m[2] == doctest::Approx(3.5));

    Vec b(5);
    b << 1, 2, 3, 4, 5;
    Vec full = moving_average(b, 5);
    REQUIRE(full.size() == 1);
    CHECK(full[0] == doctest::Approx(3.0));

    Vec c = Vec::Constant(10, 4.2);
    CHECK((moving_average(c, 3).array() - 4.2).abs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(moving_average(a, 5), Error);
}

TEST_CASE("bisquare weights formula") {
    Vec r(4);
    r << 1, 1, 1, 10; // median 1, cutoff 6
    Vec w = bisquare_weights(r);
    CHECK(w[3] == doctest::Approx(0.0));
    const double expected = std::pow(1.0 - std::pow(1.0 / 6.0, 2), 2);
    CHECK(w[0] == doctest::Approx(expected));

    Vec zero = Vec::Zero(5);
    CHECK((bisquare_weights(zero).array() == 1.0).all());

    Vec mixed(3);
    mixed << 0.0, 1.0, 6.0; // median 1 -> |r|=6 sits exactly at the cutoff
    Vec wm = bisquare_weights(mixed);
    CHECK(wm[0] == doctest::Approx(1.0));
    CHECK(wm[2] == doctest::Approx(0.0));
}
