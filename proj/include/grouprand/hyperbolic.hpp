#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "grouprand/precision.hpp"
#include "grouprand/rng.hpp"

namespace grouprand {

/// Point of the upper half-plane. Arithmetic is carried out in `Real`.
template <class Real>
struct BasicHPoint {
    static constexpr int precision_bits = RealTraits<Real>::bits;

    Real re;
    Real im;

    BasicHPoint(Real re_, Real im_) : re(std::move(re_)), im(std::move(im_))
    {
        if (!(im > Real(0.0)))
            throw std::invalid_argument("HPoint: imaginary part must be positive");
    }

    static BasicHPoint i() { return BasicHPoint(Real(0.0), Real(1.0)); }

    template <class Other>
    BasicHPoint<Other> to() const
    {
        return BasicHPoint<Other>(widen<Other>(re), widen<Other>(im));
    }
};

using HPoint = BasicHPoint<double>;
using HPointDD = BasicHPoint<DoubleDouble>;
using HPointBig = BasicHPoint<BigFloat>;

/// Polar coordinates about the disk center: hyperbolic radius and angle.
struct PolarHPoint {
    double r = 0.0;
    double theta = 0.0;
};

/// Linear fractional map z -> (az + b)/(cz + d).
template <class Real>
struct Mobius {
    Real a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static Mobius identity() { return {}; }
    Real det() const { return a * d - b * c; }
    Mobius inverse() const { return {d, -b, -c, a}; }

    friend Mobius operator*(const Mobius& x, const Mobius& y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
};

/// Argument of acosh in the half-plane metric, minus one:
/// |z - w|^2 / (2 Im z Im w).
template <class Real>
Real hdist_excess(const BasicHPoint<Real>& z, const BasicHPoint<Real>& w)
{
    const Real dx = z.re - w.re;
    const Real dy = z.im - w.im;
    return (dx * dx + dy * dy) / (Real(2.0) * z.im * w.im);
}

/// acosh(1 + e) without cancellation near e = 0; e < 0 from rounding is clamped.
inline double acosh1p(double excess)
{
    if (!(excess > 0.0))
        return 0.0;
    return std::log1p(excess + std::sqrt(excess * (excess + 2.0)));
}

template <class Real>
double hdist(const BasicHPoint<Real>& z, const BasicHPoint<Real>& w)
{
    return acosh1p(to_double(hdist_excess(z, w)));
}

template <class Real>
BasicHPoint<Real> mobius_apply(const Mobius<Real>& m, const BasicHPoint<Real>& z)
{
    // (az+b)/(cz+d) = (az+b) conj(cz+d) / |cz+d|^2; Im = det * Im z / |cz+d|^2
    const Real nr = m.a * z.re + m.b;
    const Real ni = m.a * z.im;
    const Real dr = m.c * z.re + m.d;
    const Real di = m.c * z.im;
    const Real denom = dr * dr + di * di;
    return BasicHPoint<Real>((nr * dr + ni * di) / denom, m.det() * z.im / denom);
}

/// Uniform point of the hyperbolic disk of radius R, as (radius, angle).
PolarHPoint pick_hyperbolic(double R, RandomStream& stream);

/// pick_hyperbolic with the area factor cosh R - 1 precomputed.
inline PolarHPoint pick_hyperbolic_scaled(double R, double cosh_r_minus_1, RandomStream& stream)
{
    const double x = cosh_r_minus_1 * stream.uniform();
    const double theta = 2.0 * std::numbers::pi * stream.uniform();
    const double r = acosh1p(x);
    return {r < R ? r : R, theta};
}

/// Places a polar sample in the half-plane around i: the point i e^r on the
/// imaginary axis, turned by the rotation [[c, s], [-s, c]] about i through
/// theta/2 (that rotation moves boundary directions by twice its angle).
/// c and s need not satisfy c^2 + s^2 = 1 exactly; the Mobius action of the
/// matrix is that of the exact rotation with angle atan2(s, c).
template <class Real>
BasicHPoint<Real> point_from_polar(const PolarHPoint& polar)
{
    const Real y(std::exp(polar.r));
    const double half = 0.5 * polar.theta;
    const Real c(std::cos(half));
    const Real s(std::sin(half));
    const Real c2 = c * c;
    const Real s2 = s * s;
    const Real y2 = y * y;
    const Real inv = Real(1.0) / (c2 + y2 * s2);
    return BasicHPoint<Real>((Real(1.0) - y2) * (s * c) * inv, y * (c2 + s2) * inv);
}

/// Uniform point of the hyperbolic disk of radius R about i.
template <class Real = double>
BasicHPoint<Real> pick_halfplane(double R, RandomStream& stream)
{
    return point_from_polar<Real>(pick_hyperbolic(R, stream));
}

/// Orientation-preserving isometry taking i to `center`.
template <class Real>
Mobius<Real> isometry_from_i(const BasicHPoint<Real>& center)
{
    const Real scale = sqrt(center.im);
    return {scale, center.re / scale, Real(0.0), Real(1.0) / scale};
}

/// Bits of working precision for reductions driven by an SL(2,Z) norm
/// bound X: 64 + 4 * ceil(log2(max(2, X))).
int working_precision_bits(double norm_bound);

} // namespace grouprand
