#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tscp/conformal.hpp"
#include "tscp/synthetic.hpp"

using namespace tscp;

TEST_CASE("residual_scores are absolute residuals") {
    Vec p(3), a(3);
    p << 1, 2, 3;
    a << 2, 2, 1;
    Vec s = residual_scores(p, a);
    CHECK(s[0] == 1.0);
    CHECK(s[1] == 0.0);
    CHECK(s[2] == 2.0);
    CHECK_THROWS_AS(residual_scores(p, Vec::Ones(2)), Error);
}

TEST_CASE("normalize_weights validates and normalizes") {
    Vec raw(3);
    raw << 1, 1, 2;
    Vec w = normalize_weights(raw);
    CHECK(w.sum() == doctest::Approx(1.0));
    CHECK(w[2] == doctest::Approx(0.5));
    CHECK_THROWS_AS(normalize_weights(Vec::Zero(3)), Error);
    Vec neg(2);
    neg << 1, -1;
    CHECK_THROWS_AS(normalize_weights(neg), Error);
}

TEST_CASE("conformal_quantile is the ceil((n+1)level) order statistic") {
    Vec s(5);
    s << 5, 1, 4, 2, 3;
    // n=5, level 0.5 -> rank 3 -> third smallest = 3
    CHECK(conformal_quantile(s, 0.5) == 3.0);
    // level 0.9 -> rank ceil(5.4)=6 > 5 -> infinite
    CHECK(std::isinf(conformal_quantile(s, 0.9)));
    // level 0.8 -> rank ceil(4.8)=5 -> max
    CHECK(conformal_quantile(s, 0.8) == 5.0);
}

TEST_CASE("split_cp_interval is symmetric about the prediction") {
    Vec s(9);
    s << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    Interval iv = split_cp_interval(s, 0.1, 10.0);
    // rank = ceil(10 * 0.9) = 9 -> q = 9
    CHECK(iv.lower == doctest::Approx(1.0));
    CHECK(iv.upper == doctest::Approx(19.0));
    CHECK(iv.covers(19.0));
    CHECK(!iv.covers(19.0001));
}

TEST_CASE("weighted_quantile with uniform weights matches the order-statistic rule") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(0.0, 10.0);
    for (int n : {1, 3, 10, 40}) {
        Vec s(n);
        for (int i = 0; i < n; ++i) s[i] = unif(rng);
        Vec raw = Vec::Ones(n + 1);
        for (double level : {0.5, 0.8, 0.9, 0.95}) {
            const double wq = weighted_quantile(make_weighted_scores(s, raw), level);
            const double cq = conformal_quantile(s, level);
            if (std::isinf(cq))
                CHECK(std::isinf(wq));
            else
                CHECK(wq == cq);
        }
    }
}

TEST_CASE("weighted_quantile merges tied scores before testing the level") {
    Vec s(4);
    s << 1, 1, 1, 2;
    Vec raw(5);
    raw << 1, 1, 1, 1, 1; // each normalized to 0.2
    // cumulative at score 1 is 0.6 (all ties merged) -> level 0.55 met at 1
    CHECK(weighted_quantile(make_weighted_scores(s, raw), 0.55) == 1.0);
    // level 0.7 needs score 2 as well
    CHECK(weighted_quantile(make_weighted_scores(s, raw), 0.7) == 2.0);
}

TEST_CASE("weighted_quantile returns infinity when only the test mass reaches the level") {
    Vec s(2);
    s << 1, 2;
    Vec raw(3);
    raw << 1, 1, 8; // test mass dominates
    CHECK(std::isinf(weighted_quantile(make_weighted_scores(s, raw), 0.9)));
}

TEST_CASE("weighted_quantile equals a brute-force cumulative scan on random inputs") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> size_dist(1, 50);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = size_dist(rng);
        Vec s(n), raw(n + 1);
        for (int i = 0; i < n; ++i) s[i] = std::floor(unif(rng) * 10.0); // force ties
        for (int i = 0; i <= n; ++i) raw[i] = unif(rng) + 0.01;
        const double level = 0.05 + 0.9 * unif(rng);

        WeightedScoreSet wss = make_weighted_scores(s, raw);
        // oracle: evaluate the weighted CDF at each candidate score
        std::vector<double> cand(s.data(), s.data() + n);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        double expected = kInf;
        for (double q : cand) {
            double mass = 0.0;
            for (int i = 0; i < n; ++i)
                if (s[i] <= q) mass += wss.weights[i];
            if (mass >= level) {
                expected = q;
                break;
            }
        }
        CHECK(weighted_quantile(wss, level) == expected);
    }
}

TEST_CASE("cv_plus_fit builds contiguous folds with out-of-fold residuals") {
    TimeSeries ts = generate_synthetic(120, 3);
    LagMatrix lm = build_lag_features(ts.values, 1);
    CvPlusModel m = cv_plus_fit(lm, 5, 1e-6);
    REQUIRE(m.fold_models.size() == 5);
    REQUIRE(static_cast<Index>(m.fold_of_row.size()) == lm.rows());
    // fold ids are nondecreasing over time (contiguous blocks)
    for (size_t i = 1; i < m.fold_of_row.size(); ++i)
        CHECK(m.fold_of_row[i] >= m.fold_of_row[i - 1]);
    CHECK(m.fold_of_row.front() == 0);
    CHECK(m.fold_of_row.back() == 4);
    CHECK((m.oof_residuals.array() >= 0.0).all());
    CHECK_THROWS_AS(cv_plus_fit(lm, 1, 1e-6), Error);
}

TEST_CASE("cv_plus_interval rank edge cases") {
    TimeSeries ts = generate_synthetic(120, 8);
    LagMatrix lm = build_lag_features(ts.values, 1);
    CvPlusModel m = cv_plus_fit(lm, 5, 1e-6);
    Vec x(1);
    x << ts.values[119];
    // alpha so small that floor(alpha (n+1)) = 0 -> infinite bounds
    Interval wide = cv_plus_interval(m, 1e-6, x);
    CHECK(std::isinf(wide.lower));
    CHECK(std::isinf(wide.upper));
    Interval normal = cv_plus_interval(m, 0.1, x);
    CHECK(normal.lower < normal.upper);
    CHECK(std::isfinite(normal.lower));
}

TEST_CASE("cv+ one-shot overload matches fit + interval") {
    TimeSeries ts = generate_synthetic(150, 21);
    LagMatrix lm = build_lag_features(ts.values, 1);
    Vec x(1);
    x << ts.values[149];
    Interval a = cv_plus_interval(lm, 10, 0.1, x, 1e-6);
    Interval b = cv_plus_interval(cv_plus_fit(lm, 10, 1e-6), 0.1, x);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
}
