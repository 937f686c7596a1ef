#pragma once

#include <cstdint>
#include <random>

#include "tscp/types.hpp"

namespace tscp {

/// Deterministic standard-normal stream (Box-Muller over mt19937_64), kept
/// independent of standard-library distribution internals so identical seeds
/// give identical draws everywhere.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

    double uniform(); // (0, 1)
    double normal();

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Trend 0.1 t plus a period-30 sinusoid of amplitude 100 plus unit Gaussian
/// noise, t = 1..length.
TimeSeries generate_synthetic(Index length, std::uint64_t seed);

} // namespace tscp
