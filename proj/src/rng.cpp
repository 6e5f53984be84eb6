#include "grouprand/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace grouprand {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed)
{
    std::uint64_t z = seed;
    for (auto& word : state_) {
        z += kGolden;
        word = mix64(z);
    }
}

std::uint64_t RandomStream::next_u64()
{
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

std::uint64_t RandomStream::uniform_index(std::uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("uniform_index: empty range");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold)
            return r % n;
    }
}

RandomStream RandomStream::split(std::uint64_t index) const
{
    return RandomStream(mix64(seed_ ^ mix64(index + kGolden)));
}

std::uint64_t entropy_seed()
{
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::pair<double, double> gaussian_pair(RandomStream& stream)
{
    double u1 = stream.uniform();
    while (u1 == 0.0)
        u1 = stream.uniform();
    const double u2 = stream.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

DensitySpec::DensitySpec(Function cdf, double upper, Function inverse_cdf, Function density)
    : cdf_(std::move(cdf)), inverse_(std::move(inverse_cdf)), density_(std::move(density)), upper_(upper)
{
    if (!cdf_)
        throw std::invalid_argument("DensitySpec: antiderivative required");
    if (!(upper_ > 0.0) || !std::isfinite(upper_))
        throw std::invalid_argument("DensitySpec: R must be positive and finite");
    total_ = cdf_(upper_);
    if (!(total_ > 0.0) || !std::isfinite(total_))
        throw std::invalid_argument("DensitySpec: F(R) must be positive and finite");
    if (std::abs(cdf_(0.0)) > 1e-12 * total_)
        throw std::invalid_argument("DensitySpec: F(0) must be 0");

    constexpr int kGrid = 256;
    double prev = cdf_(0.0);
    for (int k = 1; k <= kGrid; ++k) {
        const double t = upper_ * k / kGrid;
        const double value = cdf_(t);
        if (!(value > prev))
            throw std::invalid_argument("DensitySpec: F is not strictly increasing");
        if (density_ && !(density_(t) > 0.0))
            throw std::invalid_argument("DensitySpec: density must be positive");
        prev = value;
    }
}

double DensitySpec::inverse_cdf(double y) const
{
    if (inverse_)
        return inverse_(y);
    double lo = 0.0;
    double hi = upper_;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cdf_(mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

DensitySpec DensitySpec::hyperbolic_radius(double R)
{
    // cosh t - 1 written as 2 sinh^2(t/2) to keep small radii accurate
    return DensitySpec(
        [](double t) {
            const double s = std::sinh(0.5 * t);
            return 2.0 * s * s;
        },
        R, [](double y) { return std::log1p(y + std::sqrt(y * (y + 2.0))); },
        [](double t) { return std::sinh(t); });
}

DensitySpec DensitySpec::ball_radius(int n, double R)
{
    if (n < 1)
        throw std::invalid_argument("ball_radius: dimension must be positive");
    return DensitySpec([n](double t) { return std::pow(t, n) / n; }, R,
                       [n](double y) { return std::pow(n * y, 1.0 / n); },
                       [n](double t) { return std::pow(t, n - 1); });
}

double gen_random(const DensitySpec& spec, RandomStream& stream)
{
    // 1 - u lies in (0, 1], so the draw lies in (0, R]
    const double u = 1.0 - stream.uniform();
    const double t = spec.inverse_cdf(spec.total() * u);
    return std::min(t, spec.upper());
}

} // namespace grouprand
