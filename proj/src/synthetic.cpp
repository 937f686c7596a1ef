#include "tscp/synthetic.hpp"

#include <cmath>

namespace tscp {

double GaussianRng::uniform() {
    // 53-bit mantissa, strictly inside (0, 1)
    return (static_cast<double>(eng_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double GaussianRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double theta = 2.0 * M_PI * v;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

TimeSeries generate_synthetic(Index length, std::uint64_t seed) {
    if (length < 60)
        throw Error(ErrorCode::SeriesTooShort, "synthetic series needs at least 60 points");
    constexpr int kPeriod = 30;
    GaussianRng rng(seed);
    Vec values(length);
    for (Index i = 0; i < length; ++i) {
        const double t = static_cast<double>(i + 1);
        values[i] = 0.1 * t + 100.0 * std::sin(2.0 * M_PI * t / kPeriod) + rng.normal();
    }
    return make_series(std::move(values), kPeriod);
}

} // namespace tscp
