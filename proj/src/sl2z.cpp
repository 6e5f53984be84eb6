#include "grouprand/sl2z.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "grouprand/kernels.hpp"
#include "grouprand/lattice.hpp"

namespace grouprand {

namespace {

constexpr double kEllipticTolerance = 1e-15;

bool checked_translate(Mat2Z& m, std::int64_t q)
{
    // [[1, -q], [0, 1]] * m
    std::int64_t qc, qd;
    if (__builtin_mul_overflow(q, m.c, &qc) || __builtin_mul_overflow(q, m.d, &qd))
        return false;
    if (__builtin_sub_overflow(m.a, qc, &m.a) || __builtin_sub_overflow(m.b, qd, &m.b))
        return false;
    return true;
}

bool checked_invert(Mat2Z& m)
{
    // [[0, -1], [1, 0]] * m
    if (m.c == INT64_MIN || m.d == INT64_MIN)
        return false;
    m = {-m.c, -m.d, m.a, m.b};
    return true;
}

bool near_elliptic_point(double re, double im)
{
    const double h = std::sqrt(3.0) / 2.0;
    const double to_i = std::hypot(re, im - 1.0);
    const double to_rho = std::hypot(re + 0.5, im - h);
    return to_i < kEllipticTolerance || to_rho < kEllipticTolerance;
}

} // namespace

std::size_t Mat2ZHash::operator()(const Mat2Z& m) const noexcept
{
    std::uint64_t h = mix64(static_cast<std::uint64_t>(m.a));
    h = mix64(h ^ static_cast<std::uint64_t>(m.b));
    h = mix64(h ^ static_cast<std::uint64_t>(m.c));
    h = mix64(h ^ static_cast<std::uint64_t>(m.d));
    return static_cast<std::size_t>(h);
}

double translation_distance(const Mat2Z& m)
{
    // acosh(n / 2) = acosh(1 + (n - 2) / 2)
    return acosh1p(0.5 * static_cast<double>(m.norm_sq() - 2));
}

template <class Real>
ReduceAttempt<Real> reduce2_bounded(const BasicHPoint<Real>& z, int cap)
{
    using std::floor;
    ReduceAttempt<Real> out;
    Real x = z.re;
    Real y = z.im;
    const Real half(0.5);
    const Real one(1.0);
    const Real zero(0.0);
    Mat2Z A = Mat2Z::identity();
    int steps = 0;
    Real n2;
    for (;;) {
        // round half up leaves Re z in [-1/2, 1/2)
        const Real q = floor(x + half);
        if (q != zero) {
            const double qd = to_double(q);
            if (!(std::abs(qd) < 0x1p62) || !checked_translate(A, static_cast<std::int64_t>(qd))) {
                out.status = ReduceStatus::overflow;
                return out;
            }
            x = x - q;
        }
        n2 = x * x + y * y;
        if (n2 >= one)
            break;
        if (steps >= cap) {
            out.status = ReduceStatus::iteration_cap;
            out.steps = steps;
            return out;
        }
        // z -> -1/z
        const Real inv = one / n2;
        x = -x * inv;
        y = y * inv;
        if (!checked_invert(A)) {
            out.status = ReduceStatus::overflow;
            return out;
        }
        ++steps;
    }
    if (n2 == one && x > zero) {
        x = -x;
        checked_invert(A);
    }
    out.A = A;
    out.re = x;
    out.im = y;
    out.steps = steps;
    return out;
}

int reduction_cap_for_distance(double dist)
{
    const double log2_norm = std::max(1.0, dist / (2.0 * std::log(2.0)));
    return 64 + 8 * static_cast<int>(std::ceil(log2_norm));
}

namespace {

template <class Real>
bool try_reduce(const BasicHPoint<Real>& z, int cap, ReduceAttempt<BigFloat>& out)
{
    auto r = reduce2_bounded(z, cap);
    if (r.status == ReduceStatus::overflow)
        throw std::overflow_error("reduce2: reducing matrix exceeds 64-bit range");
    if (r.status == ReduceStatus::iteration_cap)
        return false;
    out.A = r.A;
    out.re = widen<BigFloat>(r.re);
    out.im = widen<BigFloat>(r.im);
    out.steps = r.steps;
    return true;
}

} // namespace

template <class Real>
ReducedPair<Real> reduce2(const BasicHPoint<Real>& z)
{
    const int cap = reduction_cap_for_distance(hdist(BasicHPoint<Real>::i(), z));
    if (auto r = reduce2_bounded(z, cap); r.status == ReduceStatus::ok)
        return {r.A, BasicHPoint<Real>(r.re, r.im), r.steps};
    else if (r.status == ReduceStatus::overflow)
        throw std::overflow_error("reduce2: reducing matrix exceeds 64-bit range");

    ReduceAttempt<BigFloat> wide;
    bool done = false;
    if constexpr (RealTraits<Real>::bits < RealTraits<DoubleDouble>::bits)
        done = try_reduce(z.template to<DoubleDouble>(), cap, wide);
    if (!done && RealTraits<Real>::bits < RealTraits<BigFloat>::bits)
        done = try_reduce(z.template to<BigFloat>(), cap, wide);
    if (!done)
        throw std::runtime_error("reduce2: iteration cap reached at every precision");
    return {wide.A, BasicHPoint<Real>(widen<Real>(wide.re), widen<Real>(wide.im)), wide.steps};
}

template ReduceAttempt<double> reduce2_bounded(const BasicHPoint<double>&, int);
template ReduceAttempt<DoubleDouble> reduce2_bounded(const BasicHPoint<DoubleDouble>&, int);
template ReduceAttempt<BigFloat> reduce2_bounded(const BasicHPoint<BigFloat>&, int);
template ReducedPair<double> reduce2(const BasicHPoint<double>&);
template ReducedPair<DoubleDouble> reduce2(const BasicHPoint<DoubleDouble>&);
template ReducedPair<BigFloat> reduce2(const BasicHPoint<BigFloat>&);

std::vector<Mat2Z> enumerate_sl2z(double X)
{
    if (X > kMaxEnumerationBound)
        throw std::invalid_argument("enumerate_sl2z: norm bound above 2000 is out of desk scale");
    const std::int64_t bound = squared_bound(X);
    std::vector<Mat2Z> out;
    const auto a_max = static_cast<std::int64_t>(std::sqrt(static_cast<double>(bound)));
    for (std::int64_t a = -a_max; a <= a_max; ++a) {
        for (std::int64_t b = -a_max; b <= a_max; ++b) {
            if (a * a + b * b > bound)
                continue;
            for_each_sl2z_with_first_row(a, b, bound, [&](const Mat2Z& m) { out.push_back(m); });
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t count_sl2z(double X)
{
    if (X > kMaxEnumerationBound)
        throw std::invalid_argument("count_sl2z: norm bound above 2000 is out of desk scale");
    return kernels::parallel::count_sl2z(squared_bound(X));
}

Mat2Z pick_sl_naive(double X, RandomStream& stream, std::uint64_t* attempts)
{
    if (squared_bound(X) < 2)
        throw std::invalid_argument("pick_sl_naive: norm bound must be at least sqrt(2)");
    for (;;) {
        if (attempts)
            ++*attempts;
        const MatNZ m = pick_matrix(2, X, stream);
        const Mat2Z candidate{m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1)};
        if (candidate.det() == 1)
            return candidate;
    }
}

double radius_schedule(double X, double eps)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("radius_schedule: epsilon must lie in (0, 1)");
    if (!(X > 0.0) || squared_bound(X) < 2)
        throw std::invalid_argument("radius_schedule: norm bound must be at least sqrt(2)");
    return acosh1p(std::max(0.0, 0.5 * X * X - 1.0)) + std::log(1.0 / eps) + 2.0;
}

FancySampler::FancySampler(double X, double eps, int precision_bits, bool filter)
    : radius_(radius_schedule(X, eps)), disk_excess_(2.0 * std::sinh(0.5 * radius_) * std::sinh(0.5 * radius_)),
      bound_(squared_bound(X)),
      bits_(precision_bits > 0 ? precision_bits : working_precision_bits(X)),
      cap_(64 + 8 * static_cast<int>(std::ceil(std::log2(std::max(2.0, X))))), filter_(filter)
{
    if (X > 0x1p30)
        throw std::invalid_argument("pick_fancy: norm bound above 2^30 not supported");
    if (bits_ > RealTraits<BigFloat>::bits)
        throw std::invalid_argument("pick_fancy: requested precision exceeds 256 bits");
}

bool FancySampler::certified_reject(const PolarHPoint& polar, FancyStats& stats) const
{
    // Reduction in double with a running bound on the distance to the exact
    // trajectory of the working-precision point. Every branch (the rounding
    // of Re z and the |z| >= 1 test) must clear its error bound; otherwise
    // the caller falls back to the working-precision path.
    constexpr double u = 0x1p-53;
    const double y0 = std::exp(polar.r);
    const double half_angle = 0.5 * polar.theta;
    const double c = std::cos(half_angle);
    const double s = std::sin(half_angle);
    const double y2 = y0 * y0;
    const double inv = 1.0 / (c * c + y2 * s * s);
    double x = (1.0 - y2) * (s * c) * inv;
    double y = y0 * (c * c + s * s) * inv;
    // a handful of roundings in each coordinate, padded by 4x
    double ex = 64.0 * u * (1.0 + y2) * std::abs(s * c) * inv;
    double ey = 64.0 * u * y;

    Mat2Z A = Mat2Z::identity();
    int steps = 0;
    for (;;) {
        const double t = x + 0.5;
        const double q = std::floor(t);
        const double margin = std::min(t - q, q + 1.0 - t);
        if (!(margin > ex + 4.0 * u * (std::abs(x) + 1.0)))
            return false;
        if (q != 0.0) {
            if (!(std::abs(q) < 0x1p52) || !checked_translate(A, static_cast<std::int64_t>(q))) {
                stats.reduction_steps += static_cast<std::uint64_t>(steps);
                ++stats.overflow_rejects;
                return true;
            }
            x -= q;
            ex += u * (std::abs(x) + std::abs(q));
        }
        const double n2 = x * x + y * y;
        const double en = 2.0 * std::abs(x) * ex + 2.0 * y * ey + ex * ex + ey * ey + 4.0 * u * n2;
        if (!(std::abs(n2 - 1.0) > en))
            return false;
        if (n2 >= 1.0)
            break;
        if (steps >= cap_ || !(en < 0.5 * n2))
            return false;
        const double lo = n2 - en;
        const double nx = std::abs(x) * en / (n2 * lo);
        const double ny = y * en / (n2 * lo);
        x = -x / n2;
        y = y / n2;
        ex = ex / lo + nx + 4.0 * u * std::abs(x);
        ey = ey / lo + ny + 4.0 * u * y;
        if (!checked_invert(A)) {
            stats.reduction_steps += static_cast<std::uint64_t>(steps);
            ++stats.overflow_rejects;
            return true;
        }
        ++steps;
    }
    if (A.norm_sq() <= bound_)
        return false;
    stats.reduction_steps += static_cast<std::uint64_t>(steps);
    return true;
}

template <class Real>
bool FancySampler::attempt(const PolarHPoint& polar, Mat2Z& out, FancyStats& stats) const
{
    const auto z = point_from_polar<Real>(polar);
    const auto r = reduce2_bounded(z, cap_);
    switch (r.status) {
    case ReduceStatus::overflow:
        ++stats.overflow_rejects;
        return false;
    case ReduceStatus::iteration_cap:
        stats.reduction_steps += static_cast<std::uint64_t>(r.steps);
        if constexpr (RealTraits<Real>::bits < RealTraits<DoubleDouble>::bits) {
            ++stats.precision_escalations;
            return attempt<DoubleDouble>(polar, out, stats);
        } else if constexpr (RealTraits<Real>::bits < RealTraits<BigFloat>::bits) {
            ++stats.precision_escalations;
            return attempt<BigFloat>(polar, out, stats);
        } else {
            throw std::runtime_error("pick_fancy: reduction hit the iteration cap at 256 bits");
        }
    case ReduceStatus::ok:
        break;
    }
    stats.reduction_steps += static_cast<std::uint64_t>(r.steps);
    if (near_elliptic_point(to_double(r.re), to_double(r.im))) {
        ++stats.elliptic_discards;
        return false;
    }
    if (r.A.norm_sq() > bound_)
        return false;
    out = r.A;
    return true;
}

Mat2Z FancySampler::operator()(RandomStream& stream, FancyStats* stats) const
{
    FancyStats local;
    Mat2Z A;
    for (;;) {
        ++local.iterations;
        const PolarHPoint polar = pick_hyperbolic_scaled(radius_, disk_excess_, stream);
        bool accepted = false;
        if (filter_ && bits_ > RealTraits<double>::bits && certified_reject(polar, local))
            continue;
        if (bits_ <= RealTraits<double>::bits)
            accepted = attempt<double>(polar, A, local);
        else if (bits_ <= RealTraits<DoubleDouble>::bits)
            accepted = attempt<DoubleDouble>(polar, A, local);
        else
            accepted = attempt<BigFloat>(polar, A, local);
        if (accepted)
            break;
    }
    if (stats)
        *stats += local;
    return stream.coin() ? -A : A;
}

Mat2Z pick_fancy(double X, double eps, RandomStream& stream, FancyStats* stats)
{
    return FancySampler(X, eps)(stream, stats);
}

} // namespace grouprand
