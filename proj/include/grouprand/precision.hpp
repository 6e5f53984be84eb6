#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace grouprand {

/// Unevaluated sum hi + lo of two doubles with |lo| <= ulp(hi)/2, giving
/// about 106 bits of significand. Only the operations the half-plane
/// reduction needs are provided.
class DoubleDouble {
public:
    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double x) : hi_(x) {}
    DoubleDouble(std::int64_t x)
    {
        hi_ = static_cast<double>(x);
        // |x| < 2^63 so hi_ rounds to at most 2^63; the difference is exact.
        lo_ = hi_ >= 0x1p63 ? static_cast<double>(x - std::numeric_limits<std::int64_t>::max()) - 1.0
                            : static_cast<double>(x - static_cast<std::int64_t>(hi_));
        normalize();
    }
    DoubleDouble(int x) : DoubleDouble(static_cast<std::int64_t>(x)) {}

    static constexpr DoubleDouble from_parts(double hi, double lo)
    {
        DoubleDouble r;
        r.hi_ = hi;
        r.lo_ = lo;
        return r;
    }

    constexpr double hi() const { return hi_; }
    constexpr double lo() const { return lo_; }
    explicit operator double() const { return hi_ + lo_; }

    DoubleDouble operator-() const { return from_parts(-hi_, -lo_); }

    friend DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b)
    {
        auto [s, e] = two_sum(a.hi_, b.hi_);
        auto [t, f] = two_sum(a.lo_, b.lo_);
        e += t;
        quick_two_sum_inplace(s, e);
        e += f;
        quick_two_sum_inplace(s, e);
        return from_parts(s, e);
    }
    friend DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

    friend DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b)
    {
        auto [p, e] = two_prod(a.hi_, b.hi_);
        e += a.hi_ * b.lo_ + a.lo_ * b.hi_;
        quick_two_sum_inplace(p, e);
        return from_parts(p, e);
    }

    friend DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b)
    {
        double q1 = a.hi_ / b.hi_;
        DoubleDouble r = a - b * DoubleDouble(q1);
        double q2 = r.hi_ / b.hi_;
        r = r - b * DoubleDouble(q2);
        double q3 = r.hi_ / b.hi_;
        quick_two_sum_inplace(q1, q2);
        return from_parts(q1, q2) + DoubleDouble(q3);
    }

    DoubleDouble& operator+=(const DoubleDouble& b) { return *this = *this + b; }
    DoubleDouble& operator-=(const DoubleDouble& b) { return *this = *this - b; }
    DoubleDouble& operator*=(const DoubleDouble& b) { return *this = *this * b; }
    DoubleDouble& operator/=(const DoubleDouble& b) { return *this = *this / b; }

    friend bool operator==(const DoubleDouble& a, const DoubleDouble& b) { return a.hi_ == b.hi_ && a.lo_ == b.lo_; }
    friend bool operator<(const DoubleDouble& a, const DoubleDouble& b)
    {
        return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
    }
    friend bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
    friend bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
    friend bool operator>=(const DoubleDouble& a, const DoubleDouble& b) { return !(a < b); }

    friend DoubleDouble sqrt(const DoubleDouble& a)
    {
        if (a.hi_ <= 0.0)
            return DoubleDouble(0.0);
        // one Newton step on the double estimate doubles the correct bits
        double x = 1.0 / std::sqrt(a.hi_);
        double ax = a.hi_ * x;
        DoubleDouble ax_dd(ax);
        DoubleDouble resid = a - ax_dd * ax_dd;
        return ax_dd + DoubleDouble(resid.hi_ * x * 0.5);
    }

    friend DoubleDouble floor(const DoubleDouble& a)
    {
        double h = std::floor(a.hi_);
        if (h != a.hi_)
            return DoubleDouble(h);
        double l = std::floor(a.lo_);
        quick_two_sum_inplace(h, l);
        return from_parts(h, l);
    }

    friend DoubleDouble abs(const DoubleDouble& a) { return a.hi_ < 0 ? -a : a; }

private:
    struct Pair {
        double s, e;
    };
    static Pair two_sum(double a, double b)
    {
        double s = a + b;
        double bb = s - a;
        double e = (a - (s - bb)) + (b - bb);
        return {s, e};
    }
    static Pair two_prod(double a, double b)
    {
        const double p = a * b;
#if defined(__FMA__) || defined(__FP_FAST_FMA)
        return {p, std::fma(a, b, -p)};
#else
        // Dekker's split; the libm fma call is far slower than this without
        // hardware fma enabled at compile time
        constexpr double kSplit = 134217729.0; // 2^27 + 1
        const double ta = kSplit * a;
        const double ah = ta - (ta - a);
        const double al = a - ah;
        const double tb = kSplit * b;
        const double bh = tb - (tb - b);
        const double bl = b - bh;
        return {p, ((ah * bh - p) + ah * bl + al * bh) + al * bl};
#endif
    }
    static void quick_two_sum_inplace(double& a, double& b)
    {
        double s = a + b;
        b = b - (s - a);
        a = s;
    }
    void normalize() { quick_two_sum_inplace(hi_, lo_); }

    double hi_ = 0.0;
    double lo_ = 0.0;
};

using BigFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2, void, std::int32_t>,
    boost::multiprecision::et_off>;

template <class Real>
struct RealTraits;

template <>
struct RealTraits<double> {
    static constexpr int bits = 53;
    static constexpr std::string_view name = "double";
    static double to_double(double x) { return x; }
};

template <>
struct RealTraits<DoubleDouble> {
    static constexpr int bits = 106;
    static constexpr std::string_view name = "double-double";
    static double to_double(const DoubleDouble& x) { return static_cast<double>(x); }
};

template <>
struct RealTraits<BigFloat> {
    static constexpr int bits = 256;
    static constexpr std::string_view name = "binary256";
    static double to_double(const BigFloat& x) { return x.convert_to<double>(); }
};

template <class Real>
double to_double(const Real& x)
{
    return RealTraits<Real>::to_double(x);
}

/// Conversion between the supported scalar types; exact when widening.
template <class To, class From>
To widen(const From& x)
{
    if constexpr (std::is_same_v<To, From>) {
        return x;
    } else if constexpr (std::is_same_v<From, double>) {
        return To(x);
    } else if constexpr (std::is_same_v<From, DoubleDouble> && std::is_same_v<To, BigFloat>) {
        return BigFloat(x.hi()) + BigFloat(x.lo());
    } else {
        return To(to_double(x));
    }
}

} // namespace grouprand
