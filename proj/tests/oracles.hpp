#pragma once

// Brute-force reference computations. Deliberately naive and independent
// of the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

struct M2 {
    std::int64_t a, b, c, d;
    friend auto operator<=>(const M2&, const M2&) = default;
};

// every integer 2x2 matrix with entries in [-r, r], det 1, norm^2 <= bound
inline std::vector<M2> sl2z(std::int64_t bound)
{
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= bound)
        ++r;
    std::vector<M2> out;
    for (std::int64_t a = -r; a <= r; ++a)
        for (std::int64_t b = -r; b <= r; ++b)
            for (std::int64_t c = -r; c <= r; ++c)
                for (std::int64_t d = -r; d <= r; ++d)
                    if (a * d - b * c == 1 && a * a + b * b + c * c + d * d <= bound)
                        out.push_back({a, b, c, d});
    return out;
}

// number of N(X) via a different route: for each (a, c) coprime, the (b, d)
// solutions form a line; scan it directly over a box
inline std::uint64_t sl2z_count(std::int64_t bound)
{
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= bound)
        ++r;
    std::uint64_t count = 0;
    for (std::int64_t a = -r; a <= r; ++a)
        for (std::int64_t c = -r; c <= r; ++c) {
            if (a * a + c * c > bound || std::gcd(a, c) != 1)
                continue;
            for (std::int64_t b = -r; b <= r; ++b) {
                // a d = 1 + b c
                if (a != 0) {
                    if ((1 + b * c) % a != 0)
                        continue;
                    const std::int64_t d = (1 + b * c) / a;
                    if (a * a + b * b + c * c + d * d <= bound)
                        ++count;
                } else {
                    // a = 0 forces b c = -1; d is free
                    if (b * c != -1)
                        continue;
                    for (std::int64_t d = -r; d <= r; ++d)
                        if (b * b + c * c + d * d <= bound)
                            ++count;
                }
            }
        }
    return count;
}

// lattice points of Z^n with |v|^2 <= bound, lexicographic
inline std::vector<std::vector<std::int64_t>> lattice_ball(int n, std::int64_t bound)
{
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= bound)
        ++r;
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> v(static_cast<std::size_t>(n), -r);
    for (;;) {
        std::int64_t s = 0;
        for (auto x : v)
            s += x * x;
        if (s <= bound)
            out.push_back(v);
        int k = n - 1;
        while (k >= 0 && v[static_cast<std::size_t>(k)] == r)
            v[static_cast<std::size_t>(k--)] = -r;
        if (k < 0)
            return out;
        ++v[static_cast<std::size_t>(k)];
    }
}

inline std::uint64_t visible(std::int64_t Q)
{
    std::uint64_t count = 0;
    for (std::int64_t a = -Q; a <= Q; ++a)
        for (std::int64_t b = -Q; b <= Q; ++b)
            if ((a || b) && a * a + b * b <= Q * Q && std::gcd(a, b) == 1)
                ++count;
    return count;
}

// #{(a, b) : a > 0, b >= 0, a^2 + b^2 = q}
inline std::uint64_t two_squares(std::int64_t q)
{
    std::uint64_t count = 0;
    for (std::int64_t a = 1; a * a <= q; ++a) {
        const std::int64_t rest = q - a * a;
        auto b = static_cast<std::int64_t>(std::sqrt(static_cast<double>(rest)));
        while (b * b > rest)
            --b;
        while ((b + 1) * (b + 1) <= rest)
            ++b;
        if (b * b == rest)
            ++count;
    }
    return count;
}

inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d < n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

// Leibniz formula mod p, row-major n x n
inline std::uint64_t det_mod(const std::vector<std::uint32_t>& m, int n, std::uint64_t p)
{
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t total = 0;
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                inversions += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
        std::uint64_t term = 1;
        for (int i = 0; i < n; ++i)
            term = term * m[static_cast<std::size_t>(i * n + perm[static_cast<std::size_t>(i)])] % p;
        total = (total + (inversions % 2 ? p - term : term)) % p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// all dim x dim matrices over F_p preserving [[0, I], [-I, 0]]
inline std::vector<std::vector<std::uint32_t>> symplectic_group(int half, std::uint32_t p)
{
    const int dim = 2 * half;
    auto J = [&](int i, int j) -> std::int64_t {
        if (i < half && j == i + half)
            return 1;
        if (i >= half && j == i - half)
            return -1;
        return 0;
    };
    std::uint64_t total = 1;
    for (int k = 0; k < dim * dim; ++k)
        total *= p;
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> m(static_cast<std::size_t>(dim * dim));
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (int k = dim * dim - 1; k >= 0; --k) {
            m[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(c % p);
            c /= p;
        }
        bool ok = true;
        for (int i = 0; i < dim && ok; ++i)
            for (int j = 0; j < dim && ok; ++j) {
                // (M^T J M)_ij = sum_kl M_ki J_kl M_lj
                std::int64_t s = 0;
                for (int k = 0; k < dim; ++k)
                    for (int l = 0; l < dim; ++l)
                        s += static_cast<std::int64_t>(m[static_cast<std::size_t>(k * dim + i)]) * J(k, l) *
                             m[static_cast<std::size_t>(l * dim + j)];
                const std::int64_t pp = p;
                ok = ((s % pp) + pp) % pp == ((J(i, j) % pp) + pp) % pp;
            }
        if (ok)
            out.push_back(m);
    }
    return out;
}

} // namespace oracle
