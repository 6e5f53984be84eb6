#include "grouprand/kernels.hpp"

#include <cmath>
#include <vector>

#include "grouprand/sl2z.hpp"

namespace grouprand::kernels {

namespace {

std::int64_t isqrt(std::int64_t n)
{
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

std::uint64_t sl2z_row(std::int64_t a, std::int64_t bound)
{
    std::uint64_t total = 0;
    const std::int64_t b_max = isqrt(bound - a * a);
    for (std::int64_t b = -b_max; b <= b_max; ++b)
        for_each_sl2z_with_first_row(a, b, bound, [&](const Mat2Z&) { ++total; });
    return total;
}

// Nonzero lattice points with a^2 + b^2 <= n.
std::int64_t disk_points(std::int64_t n)
{
    std::int64_t total = 0;
    const std::int64_t a_max = isqrt(n);
    for (std::int64_t a = -a_max; a <= a_max; ++a)
        total += 2 * isqrt(n - a * a) + 1;
    return total - 1;
}

// Moebius function on 0..n by a linear sieve.
std::vector<int> moebius(std::int64_t n)
{
    std::vector<int> mu(static_cast<std::size_t>(n + 1), 1);
    std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
    std::vector<std::int64_t> primes;
    if (n >= 0)
        mu[0] = 0;
    for (std::int64_t i = 2; i <= n; ++i) {
        if (!composite[static_cast<std::size_t>(i)]) {
            primes.push_back(i);
            mu[static_cast<std::size_t>(i)] = -1;
        }
        for (std::int64_t p : primes) {
            if (i * p > n)
                break;
            composite[static_cast<std::size_t>(i * p)] = true;
            if (i % p == 0) {
                mu[static_cast<std::size_t>(i * p)] = 0;
                break;
            }
            mu[static_cast<std::size_t>(i * p)] = -mu[static_cast<std::size_t>(i)];
        }
    }
    return mu;
}

// Visible points are counted by Moebius inversion over the common divisor d:
// sum_d mu(d) * #{nonzero points with |v| <= radius / d}.
std::int64_t visible_term(std::int64_t d, int mu, std::int64_t radius_sq)
{
    return mu == 0 ? 0 : mu * disk_points(radius_sq / (d * d));
}

} // namespace

namespace serial {

std::uint64_t count_sl2z(std::int64_t bound)
{
    std::uint64_t total = 0;
    const std::int64_t a_max = isqrt(bound);
    for (std::int64_t a = -a_max; a <= a_max; ++a)
        total += sl2z_row(a, bound);
    return total;
}

std::uint64_t visible_points(std::int64_t radius)
{
    const auto mu = moebius(radius);
    std::int64_t total = 0;
    for (std::int64_t d = 1; d <= radius; ++d)
        total += visible_term(d, mu[static_cast<std::size_t>(d)], radius * radius);
    return static_cast<std::uint64_t>(total);
}

} // namespace serial

namespace parallel {

std::uint64_t count_sl2z(std::int64_t bound)
{
    std::uint64_t total = 0;
    const std::int64_t a_max = isqrt(bound);
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : total)
    for (std::int64_t a = -a_max; a <= a_max; ++a)
        total += sl2z_row(a, bound);
    return total;
}

std::uint64_t visible_points(std::int64_t radius)
{
    const auto mu = moebius(radius);
    std::int64_t total = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : total)
    for (std::int64_t d = 1; d <= radius; ++d)
        total += visible_term(d, mu[static_cast<std::size_t>(d)], radius * radius);
    return static_cast<std::uint64_t>(total);
}

} // namespace parallel

} // namespace grouprand::kernels
