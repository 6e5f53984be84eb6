#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

#include "grouprand/hyperbolic.hpp"
#include "grouprand/rng.hpp"

namespace grouprand {

/// 2x2 integer matrix [[a, b], [c, d]].
struct Mat2Z {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    static constexpr Mat2Z identity() { return {1, 0, 0, 1}; }
    static constexpr Mat2Z S() { return {0, -1, 1, 0}; }
    static constexpr Mat2Z T(std::int64_t k = 1) { return {1, k, 0, 1}; }

    constexpr std::int64_t det() const { return a * d - b * c; }
    constexpr std::int64_t norm_sq() const { return a * a + b * b + c * c + d * d; }
    /// Inverse of a determinant-one matrix.
    constexpr Mat2Z inverse() const { return {d, -b, -c, a}; }
    constexpr Mat2Z operator-() const { return {-a, -b, -c, -d}; }

    friend constexpr Mat2Z operator*(const Mat2Z& x, const Mat2Z& y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend constexpr auto operator<=>(const Mat2Z&, const Mat2Z&) = default;

    template <class Real>
    Mobius<Real> to_mobius() const
    {
        return {Real(a), Real(b), Real(c), Real(d)};
    }
};

struct Mat2ZHash {
    std::size_t operator()(const Mat2Z& m) const noexcept;
};

constexpr std::int64_t frobenius_norm_sq(const Mat2Z& m) { return m.norm_sq(); }

/// Hyperbolic distance d(i, A i) of a determinant-one matrix,
/// acosh(|A|^2 / 2), which equals 2 log of the top singular value.
double translation_distance(const Mat2Z& m);

template <class Real>
BasicHPoint<Real> apply(const Mat2Z& m, const BasicHPoint<Real>& z)
{
    return mobius_apply(m.to_mobius<Real>(), z);
}

/// Reduction of z into the fundamental domain { |Re z| <= 1/2, |z| >= 1 },
/// with z0 = A z. Boundary representatives: Re z0 in [-1/2, 1/2), and
/// Re z0 <= 0 when |z0| = 1.
template <class Real>
struct ReducedPair {
    Mat2Z A;
    BasicHPoint<Real> z0;
    int steps = 0;
};

enum class ReduceStatus { ok, iteration_cap, overflow };

template <class Real>
struct ReduceAttempt {
    ReduceStatus status = ReduceStatus::ok;
    Mat2Z A;
    Real re{0.0};
    Real im{1.0};
    int steps = 0; // number of inversions
};

/// One pass of the reduction at the precision of `Real`, giving up after
/// `cap` inversions or on 64-bit overflow of the accumulated matrix.
template <class Real>
ReduceAttempt<Real> reduce2_bounded(const BasicHPoint<Real>& z, int cap);

/// Inversion cap for a point at hyperbolic distance `dist` from i.
int reduction_cap_for_distance(double dist);

/// Gauss reduction with matrix accumulation. On hitting the iteration cap
/// the point is widened to the next precision and reduced again.
/// Throws std::runtime_error if no precision succeeds, std::overflow_error
/// if A leaves the 64-bit range.
template <class Real>
ReducedPair<Real> reduce2(const BasicHPoint<Real>& z);

/// Calls fn(Mat2Z) for every determinant-one matrix with first row (a, b)
/// and norm_sq <= bound.
template <class Fn>
void for_each_sl2z_with_first_row(std::int64_t a, std::int64_t b, std::int64_t bound, Fn&& fn);

/// Largest norm bound accepted by the enumeration oracle.
inline constexpr double kMaxEnumerationBound = 2000.0;

/// All of { A in SL(2,Z) : |A| <= X } in lexicographic (a, b, c, d) order.
std::vector<Mat2Z> enumerate_sl2z(double X);

/// |{ A in SL(2,Z) : |A| <= X }| without materializing the list.
std::uint64_t count_sl2z(double X);

/// Exactly uniform by rejection: pick_matrix(2, X) until det = 1.
/// `attempts` accumulates the number of pick_matrix calls.
Mat2Z pick_sl_naive(double X, RandomStream& stream, std::uint64_t* attempts = nullptr);

/// Disk radius acosh(X^2 / 2) + log(1 / eps) + 2 for the hyperbolic sampler.
double radius_schedule(double X, double eps);

struct FancyStats {
    std::uint64_t iterations = 0;
    std::uint64_t reduction_steps = 0;
    std::uint64_t precision_escalations = 0;
    std::uint64_t elliptic_discards = 0;
    std::uint64_t overflow_rejects = 0;

    FancyStats& operator+=(const FancyStats& o)
    {
        iterations += o.iterations;
        reduction_steps += o.reduction_steps;
        precision_escalations += o.precision_escalations;
        elliptic_discards += o.elliptic_discards;
        overflow_rejects += o.overflow_rejects;
        return *this;
    }
};

/// Near-uniform sampler for { A in SL(2,Z) : |A| <= X }: draw a uniform
/// point in the disk of radius radius_schedule(X, eps) about i, reduce it,
/// keep the reducing matrix if its norm is within bound, and attach a
/// uniform sign.
class FancySampler {
public:
    /// precision_bits = 0 picks working_precision_bits(X). With `filter`,
    /// each draw is first reduced in double under a running error bound and
    /// discarded there when the bound proves the working-precision
    /// reduction would reject it; the output sequence is unchanged.
    FancySampler(double X, double eps, int precision_bits = 0, bool filter = true);

    Mat2Z operator()(RandomStream& stream, FancyStats* stats = nullptr) const;

    double radius() const { return radius_; }
    int precision_bits() const { return bits_; }
    int iteration_cap() const { return cap_; }
    std::int64_t bound() const { return bound_; }

private:
    template <class Real>
    bool attempt(const PolarHPoint& polar, Mat2Z& out, FancyStats& stats) const;
    bool certified_reject(const PolarHPoint& polar, FancyStats& stats) const;

    double radius_;
    double disk_excess_; // cosh R - 1
    std::int64_t bound_;
    int bits_;
    int cap_;
    bool filter_;
};

Mat2Z pick_fancy(double X, double eps, RandomStream& stream, FancyStats* stats = nullptr);

// ---------------------------------------------------------------------------

namespace detail {

struct ExtGcd {
    std::int64_t g, s, t; // a s + b t = g >= 0
};

constexpr ExtGcd ext_gcd(std::int64_t a, std::int64_t b)
{
    std::int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::int64_t tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (r0 < 0)
        return {-r0, -s0, -t0};
    return {r0, s0, t0};
}

} // namespace detail

template <class Fn>
void for_each_sl2z_with_first_row(std::int64_t a, std::int64_t b, std::int64_t bound, Fn&& fn)
{
    const std::int64_t rem = bound - a * a - b * b;
    if (rem < 1)
        return;
    const auto [g, s, t] = detail::ext_gcd(a, b);
    if (g != 1)
        return;
    // a d - b c = 1 has solutions (c, d) = (-t + k a, s + k b)
    const std::int64_t c0 = -t;
    const std::int64_t d0 = s;
    const double qa = static_cast<double>(a * a + b * b);
    const double qb = static_cast<double>(a * c0 + b * d0);
    const double qc = static_cast<double>(c0 * c0 + d0 * d0 - rem);
    const double disc = qb * qb - qa * qc;
    const double center = -qb / qa;
    const double half = disc > 0.0 ? std::sqrt(disc) / qa : 0.0;
    const auto k_lo = static_cast<std::int64_t>(std::floor(center - half)) - 1;
    const auto k_hi = static_cast<std::int64_t>(std::ceil(center + half)) + 1;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const std::int64_t c = c0 + k * a;
        const std::int64_t d = d0 + k * b;
        if (c * c + d * d <= rem)
            fn(Mat2Z{a, b, c, d});
    }
}

} // namespace grouprand
