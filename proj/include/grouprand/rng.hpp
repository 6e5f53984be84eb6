#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>

namespace grouprand {

/// Deterministic xoshiro256** stream seeded through splitmix64.
///
/// The output sequence depends only on the 64-bit seed, so results replay
/// bit-for-bit on every platform. A stream has a single owner; use split()
/// to derive independent streams for parallel work.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();

    /// 53-bit uniform in [0, 1).
    double uniform();

    /// Unbiased uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

    bool coin() { return (next_u64() >> 63) != 0; }

    /// Stream for sub-task `index`, a pure function of (seed, index).
    RandomStream split(std::uint64_t index) const;

private:
    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Seed from the OS entropy source, for runs without --seed.
std::uint64_t entropy_seed();

inline double uniform(RandomStream& stream) { return stream.uniform(); }

/// Two independent standard normals (Box-Muller). A zero first uniform is
/// redrawn, so the result is always finite.
std::pair<double, double> gaussian_pair(RandomStream& stream);

/// A density on (0, R] described by its antiderivative.
///
/// `cdf` is F with F(0) = 0; `inverse_cdf` is optional and, when absent,
/// F is inverted by bisection to 1e-12 relative accuracy.
class DensitySpec {
public:
    using Function = std::function<double(double)>;

    /// Throws std::invalid_argument if R <= 0, F(0) != 0, or F is not
    /// strictly increasing on a grid over [0, R].
    DensitySpec(Function cdf, double upper, Function inverse_cdf = {}, Function density = {});

    double upper() const { return upper_; }
    double total() const { return total_; }
    double cdf(double t) const { return cdf_(t); }
    double inverse_cdf(double y) const;

    /// Density f(t) = sinh t: hyperbolic-disk radius.
    static DensitySpec hyperbolic_radius(double R);
    /// Density f(t) = t^(n-1): Euclidean n-ball radius.
    static DensitySpec ball_radius(int n, double R);

private:
    Function cdf_;
    Function inverse_;
    Function density_;
    double upper_;
    double total_;
};

/// Draws t in (0, R] with density proportional to f: F^{-1}(F(R) * u).
double gen_random(const DensitySpec& spec, RandomStream& stream);

} // namespace grouprand
