#include <doctest.h>

#include <cmath>

#include "tscp/conformal.hpp"
#include "tscp/weights.hpp"

using namespace tscp;

namespace {

// Calibration samples i = 1..n with positions i mod tau.
SeasonContext make_ctx(int n, int tau, int test_position) {
    SeasonContext ctx;
    ctx.tau = tau;
    ctx.test_position = test_position;
    ctx.cal_positions.resize(n);
    for (int i = 1; i <= n; ++i) ctx.cal_positions[i - 1] = i % tau;
    return ctx;
}

} // namespace

TEST_CASE("circular position distance wraps around") {
    CHECK(circular_position_distance(0, 6, 7) == 1);
    CHECK(circular_position_distance(2, 5, 7) == 3);
    CHECK(circular_position_distance(3, 3, 7) == 0);
}

TEST_CASE("binary point selects exactly the residue class: n=21, tau=7, pos=4") {
    Vec w = binary_point_weights(make_ctx(21, 7, 4));
    for (int i = 1; i <= 21; ++i) {
        const bool selected = i == 4 || i == 11 || i == 18;
        CHECK(w[i - 1] == (selected ? 1.0 : 0.0));
    }
}

TEST_CASE("binary point degenerates to split CP at tau=1") {
    Vec w = binary_point_weights(make_ctx(10, 1, 0));
    CHECK((w.array() == 1.0).all());
}

TEST_CASE("binary point with no matching index is an empty selection") {
    SeasonContext ctx;
    ctx.tau = 50;
    ctx.test_position = 30;
    ctx.cal_positions = {1, 2, 3};
    Vec w = binary_point_weights(ctx);
    CHECK(empty_selection(w));
}

TEST_CASE("binary local k=0 equals binary point exhaustively") {
    for (int tau = 3; tau <= 20; ++tau)
        for (int n : {5, 37, 100})
            for (int pos = 0; pos < tau; ++pos) {
                SeasonContext ctx = make_ctx(n, tau, pos);
                CHECK(binary_local_weights(ctx, 0) == binary_point_weights(ctx));
            }
}

TEST_CASE("binary local neighborhood: n=21, tau=7, pos=4, k=1") {
    Vec w = binary_local_weights(make_ctx(21, 7, 4), 1);
    for (int i = 1; i <= 21; ++i) {
        const int pos = i % 7;
        const bool selected = pos >= 3 && pos <= 5;
        CHECK(w[i - 1] == (selected ? 1.0 : 0.0));
    }
}

TEST_CASE("binary local with tau=3, k=1 selects every position") {
    Vec w = binary_local_weights(make_ctx(12, 3, 1), 1);
    CHECK((w.array() == 1.0).all());
}

TEST_CASE("binary local rejects overly wide neighborhoods") {
    CHECK_THROWS_AS(binary_local_weights(make_ctx(21, 7, 4), 4), Error);
    CHECK_NOTHROW(binary_local_weights(make_ctx(21, 7, 4), 3));
}

TEST_CASE("exp local decay values") {
    SeasonContext ctx;
    ctx.tau = 10;
    ctx.test_position = 0;
    ctx.cal_positions = {0, 2};
    Vec w = exp_local_weights(ctx, 0.5);
    CHECK(w[0] == doctest::Approx(0.5));
    CHECK(w[1] == doctest::Approx(0.5 * std::exp(-1.0)));
}

TEST_CASE("exp local at tiny lambda gives a near-uniform normalized vector") {
    SeasonContext ctx = make_ctx(50, 7, 3);
    Vec raw = exp_local_weights(ctx, 1e-6);
    Vec full(51);
    full.head(50) = raw;
    full[50] = 1e-6; // test mass uses the same decay scale
    Vec norm = normalize_weights(full);
    for (Index i = 0; i < 51; ++i)
        CHECK(std::abs(norm[i] - 1.0 / 51.0) < 1e-4);
}

TEST_CASE("default decay shrinks a half-period separation to about 1%") {
    const double lambda = default_decay(30);
    CHECK(std::exp(-lambda * 15.0) == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(default_decay(2) == doctest::Approx(0.99)); // capped inside (0,1)
}

TEST_CASE("recency filter cutoff arithmetic") {
    Vec ones = Vec::Ones(21);
    SUBCASE("full retention is the identity") {
        CHECK(recency_filter(ones, 7, 3) == Vec::Ones(21));
        CHECK(recency_filter(ones, 7, 10) == Vec::Ones(21));
    }
    SUBCASE("keep one period of 7 out of 21") {
        Vec w = recency_filter(ones, 7, 1);
        for (int i = 1; i <= 21; ++i) CHECK(w[i - 1] == (i >= 15 ? 1.0 : 0.0));
    }
    SUBCASE("composition with binary point leaves the most recent match") {
        Vec bp = binary_point_weights(make_ctx(21, 7, 4));
        Vec w = recency_filter(bp, 7, 1);
        for (int i = 1; i <= 21; ++i) CHECK(w[i - 1] == (i == 18 ? 1.0 : 0.0));
    }
}

TEST_CASE("knn weights pick the k nearest with lower-index tie breaks") {
    Mat cal(5, 1);
    cal << 3, 1, 4, 1.5, 9;
    Vec test(1);
    test << 0.0;
    Vec w = knn_weights(cal, test, 2);
    CHECK(w[1] == 1.0);
    CHECK(w[3] == 1.0);
    CHECK(w.sum() == 2.0);

    Mat tied(3, 1);
    tied << 2, 2, 2;
    Vec wt = knn_weights(tied, test, 2);
    CHECK(wt[0] == 1.0);
    CHECK(wt[1] == 1.0);
    CHECK(wt[2] == 0.0);
}

TEST_CASE("knn k=n is uniform and k out of range throws") {
    Mat cal(4, 2);
    cal.setRandom();
    Vec test = Vec::Zero(2);
    CHECK((knn_weights(cal, test, 4).array() == 1.0).all());
    CHECK_THROWS_AS(knn_weights(cal, test, 0), Error);
    CHECK_THROWS_AS(knn_weights(cal, test, 5), Error);
    CHECK_THROWS_AS(knn_weights(cal, Vec::Zero(3), 2), Error);
}

TEST_CASE("feat dist weights are reciprocals with a capped zero-distance rule") {
    Mat cal(3, 1);
    cal << 1, 2, 4;
    Vec test(1);
    test << 0.0;
    Vec w = feat_dist_weights(cal, test);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(0.5));
    CHECK(w[2] == doctest::Approx(0.25));

    Mat withzero(2, 1);
    withzero << 0, 1;
    Vec wz = feat_dist_weights(withzero, test);
    CHECK(wz[0] == doctest::Approx(10.0 * wz[1]));
}

TEST_CASE("weight schemes never look at scores: permuting both leaves the quantile fixed") {
    SeasonContext ctx = make_ctx(30, 5, 2);
    Vec raw = exp_local_weights(ctx, 0.4);
    Vec scores(30);
    for (Index i = 0; i < 30; ++i) scores[i] = static_cast<double>((i * 13) % 30);
    Vec full(31);
    full.head(30) = raw;
    full[30] = 0.4;
    const double q1 = weighted_quantile(make_weighted_scores(scores, full), 0.9);

    // reverse both scores and weights together
    Vec rs = scores.reverse();
    Vec rw(31);
    rw.head(30) = raw.reverse();
    rw[30] = 0.4;
    const double q2 = weighted_quantile(make_weighted_scores(rs, rw), 0.9);
    CHECK(q1 == q2);
}
