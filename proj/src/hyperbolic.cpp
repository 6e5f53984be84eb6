#include "grouprand/hyperbolic.hpp"

#include <algorithm>

namespace grouprand {

PolarHPoint pick_hyperbolic(double R, RandomStream& stream)
{
    if (!(R > 0.0))
        throw std::invalid_argument("pick_hyperbolic: radius must be positive");
    // cosh R - 1 = 2 sinh^2(R/2)
    const double s = std::sinh(0.5 * R);
    return pick_hyperbolic_scaled(R, 2.0 * s * s, stream);
}

int working_precision_bits(double norm_bound)
{
    const double x = std::max(2.0, norm_bound);
    return 64 + 4 * static_cast<int>(std::ceil(std::log2(x)));
}

} // namespace grouprand
