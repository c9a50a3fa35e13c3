#include "smoothmax/random.hpp"

#include <cmath>
#include <numbers>

namespace smoothmax {

double Rng::normal() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    // 1 - uniform() lies in (0, 1], keeping the log finite
    const double u1     = 1.0 - uniform();
    const double u2     = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle  = 2.0 * std::numbers::pi * u2;
    spare_              = radius * std::sin(angle);
    return radius * std::cos(angle);
}

}  // namespace smoothmax
