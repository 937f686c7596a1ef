#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "tscp/errors.hpp"

namespace tscp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Univariate response indexed 1..T with a declared seasonal period and
/// optional exogenous covariates (one row per time step).
struct TimeSeries {
    Vec values;
    Eigen::VectorXi time_index;
    int period = 0;
    std::optional<Mat> features;

    Index size() const { return values.size(); }
};

TimeSeries make_series(Vec values, int period, std::optional<Mat> features = {});

/// Throws unless all TimeSeries invariants hold. `need_decomposition`
/// additionally enforces 2 <= period <= T/2.
const TimeSeries& validate_series(const TimeSeries& series, bool need_decomposition = true);

/// Contiguous temporal split: train = [1, train_end], cal = (train_end, cal_end],
/// test = (cal_end, T]. Indices are counts of leading samples.
struct SplitSpec {
    Index train_end = 0;
    Index cal_end = 0;
};

SplitSpec default_split(Index total); // 50% train / 25% cal / 25% test
void validate_split(const SplitSpec& split, Index total);

struct DecompositionResult {
    Vec trend;
    Vec seasonal;
    Vec remainder;
};

enum class Component { Trend, Seasonal, Remainder, Recomposed, Raw };

std::string component_name(Component c);

/// Pointwise bounds over some index range; infinite bounds are legal and
/// tracked via has_infinite().
struct IntervalSeries {
    Vec lower;
    Vec upper;
    Component component = Component::Raw;

    Index size() const { return lower.size(); }
    bool has_infinite() const;
};

IntervalSeries make_intervals(Vec lower, Vec upper, Component component);

enum class Method {
    EnbPI,
    ACI,
    CVPlus,
    BinaryPoint,
    BinaryLocal,
    ExpLocal,
    KNN,
    FeatDistPoint,
};

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// Which conformal method handles each component, plus the shared
/// miscoverage budget.
struct MethodAssignment {
    Method trend_method = Method::EnbPI;
    Method season_method = Method::EnbPI;
    Method remainder_method = Method::CVPlus;
    double alpha = 0.1;
    bool bonferroni = false;
};

void validate_assignment(const MethodAssignment& assignment);

struct HyperParams {
    double gamma = 0.01;       // ACI step size
    int ensemble_size = 20;    // EnbPI bootstrap members B
    int cv_folds = 20;         // CV+ folds K
    int neighborhood = 2;      // BinaryLocal k
    double decay = 0.0;        // ExpLocal lambda; 0 selects the period-based default
    int knn_k = 0;             // KNN neighbours; 0 selects k = n
    int lag_order = 1;         // autoregressive lags fed to the linear model
    double ridge_penalty = 1e-6;
    int recency_periods = 0;   // 0 disables the recency filter
    std::uint64_t seed = 42;
};

void validate_hyperparams(const HyperParams& hp);

/// Period position of a 1-based time index, in {0,...,tau-1}.
inline int period_position(Index t, int tau) { return static_cast<int>(t % tau); }

} // namespace tscp
