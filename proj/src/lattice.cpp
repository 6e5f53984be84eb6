#include "grouprand/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grouprand {

std::int64_t LatticeVector::norm_sq() const
{
    std::int64_t s = 0;
    for (auto v : coords)
        s += v * v;
    return s;
}

std::int64_t MatNZ::frobenius_norm_sq() const
{
    std::int64_t s = 0;
    for (auto v : entries)
        s += v * v;
    return s;
}

std::int64_t squared_bound(double X)
{
    if (!(X >= 0.0) || !std::isfinite(X))
        throw std::invalid_argument("norm bound must be finite and non-negative");
    if (X > 3.0e9)
        throw std::invalid_argument("norm bound too large for 64-bit entries");
    const double sq = X * X;
    return static_cast<std::int64_t>(std::floor(sq + 1e-6 * std::max(1.0, sq)));
}

std::vector<double> ball_point(int n, double R, RandomStream& stream)
{
    if (n < 1)
        throw std::invalid_argument("ball_point: dimension must be positive");
    std::vector<double> x(static_cast<std::size_t>(n));
    double norm_sq = 0.0;
    do {
        norm_sq = 0.0;
        for (int k = 0; k < n; k += 2) {
            auto [g1, g2] = gaussian_pair(stream);
            x[static_cast<std::size_t>(k)] = g1;
            if (k + 1 < n)
                x[static_cast<std::size_t>(k + 1)] = g2;
        }
        for (double v : x)
            norm_sq += v * v;
    } while (norm_sq == 0.0);
    const double radius = R * std::pow(stream.uniform(), 1.0 / n);
    const double scale = radius / std::sqrt(norm_sq);
    for (double& v : x)
        v *= scale;
    return x;
}

LatticeVector pick_lattice_vector(int n, double X, RandomStream& stream, std::uint64_t* attempts)
{
    const std::int64_t bound = squared_bound(X);
    const double padded = X + std::sqrt(static_cast<double>(n));
    LatticeVector v{std::vector<std::int64_t>(static_cast<std::size_t>(n))};
    std::uint64_t tries = 0;
    for (;;) {
        ++tries;
        const auto x = ball_point(n, padded, stream);
        std::int64_t s = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            // std::round: halves go away from zero
            v.coords[k] = static_cast<std::int64_t>(std::round(x[k]));
            s += v.coords[k] * v.coords[k];
        }
        if (s <= bound)
            break;
    }
    if (attempts)
        *attempts += tries;
    return v;
}

MatNZ pick_matrix(int n, double X, RandomStream& stream, std::uint64_t* attempts)
{
    auto v = pick_lattice_vector(n * n, X, stream, attempts);
    return MatNZ{n, std::move(v.coords)};
}

std::vector<LatticeVector> enumerate_lattice_ball(int n, double X)
{
    const std::int64_t bound = squared_bound(X);
    const auto r = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(bound)) + 1e-9));
    if (n < 1 || std::pow(2.0 * r + 1.0, n) > 1e8)
        throw std::invalid_argument("enumerate_lattice_ball: cube too large to scan");
    std::vector<LatticeVector> out;
    std::vector<std::int64_t> cur(static_cast<std::size_t>(n), -r);
    // odometer over the cube [-r, r]^n
    for (;;) {
        std::int64_t s = 0;
        for (auto c : cur)
            s += c * c;
        if (s <= bound)
            out.push_back({cur});
        int k = n - 1;
        while (k >= 0 && cur[static_cast<std::size_t>(k)] == r) {
            cur[static_cast<std::size_t>(k)] = -r;
            --k;
        }
        if (k < 0)
            break;
        ++cur[static_cast<std::size_t>(k)];
    }
    return out;
}

} // namespace grouprand

namespace grouprand {

namespace {

std::size_t hash_coords(const std::vector<std::int64_t>& xs, std::uint64_t h)
{
    for (auto x : xs)
        h = mix64(h ^ static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h);
}

} // namespace

std::size_t LatticeVectorHash::operator()(const LatticeVector& v) const noexcept
{
    return hash_coords(v.coords, v.coords.size());
}

std::size_t MatNZHash::operator()(const MatNZ& m) const noexcept
{
    return hash_coords(m.entries, static_cast<std::uint64_t>(m.n));
}

} // namespace grouprand
