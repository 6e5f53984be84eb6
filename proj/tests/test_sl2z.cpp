#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "grouprand/kernels.hpp"
#include "grouprand/lattice.hpp"
#include "grouprand/sl2z.hpp"
#include "grouprand/stats.hpp"
#include "oracles.hpp"

using namespace grouprand;

namespace {

bool same(const Mat2Z& m, const oracle::M2& o) { return m.a == o.a && m.b == o.b && m.c == o.c && m.d == o.d; }

std::vector<std::uint64_t> tally_sl2z(double X, std::uint64_t draws, std::uint64_t seed,
                                      const std::function<Mat2Z(RandomStream&)>& draw)
{
    const Tally<Mat2Z, Mat2ZHash> tally(enumerate_sl2z(X));
    return kernels::parallel::tally(seed, draws, tally.support_size(), draw,
                                    [&](const Mat2Z& m) { return tally.index_of(m); });
}

DoubleDouble to_dd(const BigFloat& x)
{
    const double hi = to_double(x);
    return DoubleDouble(hi) + DoubleDouble(to_double(BigFloat(x - hi)));
}

BigFloat big_dist(const HPointBig& z, const HPointBig& w)
{
    const BigFloat dx = z.re - w.re, dy = z.im - w.im;
    return sqrt(dx * dx + dy * dy);
}

} // namespace

TEST_CASE("frobenius_norm_sq and translation_distance")
{
    CHECK(frobenius_norm_sq(Mat2Z::identity()) == 2);
    CHECK(frobenius_norm_sq(Mat2Z::T()) == 3);
    CHECK(frobenius_norm_sq(Mat2Z{2, 1, 1, 1}) == 7);
    CHECK(translation_distance(Mat2Z::identity()) == 0.0);
    CHECK(translation_distance(Mat2Z{2, 1, 1, 1}) == doctest::Approx(std::acosh(3.5)).epsilon(1e-14));
    CHECK(translation_distance(Mat2Z::T()) == doctest::Approx(std::acosh(1.5)).epsilon(1e-14));
    CHECK(hdist(HPoint::i(), HPoint(1, 1)) == doctest::Approx(std::acosh(1.5)).epsilon(1e-14));
    CHECK(hdist(HPoint::i(), apply(Mat2Z{2, 1, 1, 1}, HPoint::i())) ==
          doctest::Approx(std::acosh(3.5)).epsilon(1e-14));
}

TEST_CASE("translation distance equals hdist(i, A i) on the oracle set")
{
    const auto all = enumerate_sl2z(30.0);
    double worst = 0;
    for (const auto& A : all) {
        worst = std::max(worst, std::abs(translation_distance(A) - hdist(HPoint::i(), apply(A, HPoint::i()))));
        REQUIRE(frobenius_norm_sq(A) == frobenius_norm_sq(A.inverse()));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("Mat2Z algebra")
{
    const Mat2Z S = Mat2Z::S(), T = Mat2Z::T();
    CHECK(S * S == -Mat2Z::identity());
    CHECK((S * T) * (S * T) * (S * T) == -Mat2Z::identity());
    CHECK(T * T.inverse() == Mat2Z::identity());
    CHECK(Mat2Z::T(5) == Mat2Z{1, 5, 0, 1});
    CHECK(Mat2ZHash{}(S) != Mat2ZHash{}(T));
    CHECK(Mat2Z{0, 0, 0, 1} < Mat2Z{0, 0, 1, 0});
}

TEST_CASE("reduce2: worked examples at every precision")
{
    const auto r1 = reduce2(HPoint::i());
    CHECK(r1.A == Mat2Z::identity());
    CHECK(r1.z0.re == 0.0);
    CHECK(r1.z0.im == 1.0);

    const auto r2 = reduce2(HPoint(5, 1));
    CHECK(r2.A == Mat2Z{1, -5, 0, 1});
    CHECK(r2.z0.re == 0.0);
    CHECK(r2.z0.im == 1.0);

    const auto r3 = reduce2(HPoint(0, 0.25));
    CHECK(r3.A == Mat2Z{0, -1, 1, 0});
    CHECK(r3.z0.re == 0.0);
    CHECK(r3.z0.im == 4.0);

    const auto d3 = reduce2(HPointDD(DoubleDouble(0.0), DoubleDouble(0.25)));
    CHECK(d3.A == Mat2Z{0, -1, 1, 0});
    CHECK(d3.z0.im == DoubleDouble(4.0));
    const auto b3 = reduce2(HPointBig(BigFloat(0), BigFloat(0.25)));
    CHECK(b3.A == Mat2Z{0, -1, 1, 0});
    CHECK(b3.z0.im == BigFloat(4));
}

TEST_CASE("reduce2: boundary conventions")
{
    // Re = 1/2 maps to -1/2
    const auto right = reduce2(HPoint(0.5, 2.0));
    CHECK(right.z0.re == -0.5);
    CHECK(right.A == Mat2Z::T(-1));
    const auto left = reduce2(HPoint(-0.5, 2.0));
    CHECK(left.z0.re == -0.5);
    CHECK(left.A == Mat2Z::identity());
    // on the unit circle the representative has Re <= 0
    int found = 0;
    for (double c = 0.05; c < 0.5; c += 0.01) {
        const double s = std::sqrt(1 - c * c);
        if (c * c + s * s != 1.0)
            continue;
        ++found;
        const auto arc = reduce2(HPoint(c, s));
        CHECK(arc.A == Mat2Z::S());
        CHECK(arc.z0.re == doctest::Approx(-c));
        CHECK(arc.z0.im == doctest::Approx(s));
        CHECK(reduce2(HPoint(-c, s)).A == Mat2Z::identity());
    }
    CHECK(found > 0);
}

TEST_CASE("reduce2 invariants on 1e4 points of the radius-20 disk")
{
    RandomStream s(21);
    int worst_steps = 0;
    for (int k = 0; k < 10'000; ++k) {
        const HPointDD z = pick_halfplane<DoubleDouble>(20.0, s);
        const auto r = reduce2(z);
        const double x = to_double(r.z0.re), y = to_double(r.z0.im);
        REQUIRE(std::abs(x) <= 0.5 + 1e-12);
        REQUIRE(x * x + y * y >= 1 - 1e-12);
        REQUIRE(r.A.det() == 1);
        const HPointBig exact = apply(r.A, z.to<BigFloat>());
        REQUIRE(big_dist(exact, r.z0.to<BigFloat>()) <= BigFloat(1e-9));
        worst_steps = std::max(worst_steps, r.steps);
    }
    MESSAGE("most inversions in one reduction: " << worst_steps);
}

TEST_CASE("reduce2 recovers planted orbit representatives")
{
    RandomStream s(22);
    for (int k = 0; k < 2000; ++k) {
        Mat2Z A0 = Mat2Z::identity();
        const auto len = 1 + s.uniform_index(30);
        for (std::uint64_t j = 0; j < len; ++j) {
            const auto letter = s.uniform_index(3);
            A0 = A0 * (letter == 0 ? Mat2Z::S() : letter == 1 ? Mat2Z::T() : Mat2Z::T(-1));
        }
        // interior point of the fundamental domain, away from elliptic points
        double re, im;
        do {
            re = 0.9 * s.uniform() - 0.45;
            im = 0.9 + 2 * s.uniform();
        } while (re * re + im * im < 1.05);
        const HPointBig z0{BigFloat(re), BigFloat(im)};
        const HPointBig z = apply(A0.inverse(), z0);
        const auto r = reduce2(HPointDD(to_dd(z.re), to_dd(z.im)));
        CHECK(std::abs(to_double(r.z0.re) - re) <= 1e-9);
        CHECK(std::abs(to_double(r.z0.im) - im) <= 1e-9);
        CHECK((r.A == A0 || r.A == -A0));
    }
}

TEST_CASE("reduce2_bounded reports caps and overflow")
{
    const auto capped = reduce2_bounded(HPoint(0.3, 1e-6), 1);
    CHECK(capped.status == ReduceStatus::iteration_cap);
    const auto overflow = reduce2_bounded(HPointBig(sqrt(BigFloat(2)) - 1, BigFloat("1e-60")), 100000);
    CHECK(overflow.status == ReduceStatus::overflow);
    CHECK_THROWS_AS(reduce2(HPointBig(sqrt(BigFloat(2)) - 1, BigFloat("1e-60"))), std::overflow_error);
    CHECK(reduction_cap_for_distance(0.0) == 72);
    CHECK(reduction_cap_for_distance(40.0) > reduction_cap_for_distance(4.0));
}

TEST_CASE("enumerate_sl2z matches brute force")
{
    for (double X : {std::sqrt(2.0), 2.0, 3.0, 5.0, 10.0}) {
        const auto got = enumerate_sl2z(X);
        const auto want = oracle::sl2z(squared_bound(X));
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < got.size(); ++k)
            CHECK(same(got[k], want[k]));
        CHECK(count_sl2z(X) == want.size());
    }
    const auto four = enumerate_sl2z(1.4142135);
    CHECK(four.size() == 4);
    CHECK(std::find(four.begin(), four.end(), Mat2Z::S()) != four.end());
    CHECK(std::find(four.begin(), four.end(), -Mat2Z::identity()) != four.end());
    CHECK(enumerate_sl2z(1.0).empty());
    CHECK_THROWS(enumerate_sl2z(2001.0));
}

TEST_CASE("N(X) / X^2 at X = 200")
{
    const std::uint64_t n = count_sl2z(200.0);
    CHECK(n == oracle::sl2z_count(40000));
    const double ratio = static_cast<double>(n) / 40000.0;
    CHECK(ratio >= 5.5);
    CHECK(ratio <= 6.5);
}

TEST_CASE("pick_sl_naive: exactly uniform")
{
    for (double X : {std::sqrt(2.0), 2.0}) {
        const auto counts = tally_sl2z(X, 100'000, 31, [X](RandomStream& s) { return pick_sl_naive(X, s); });
        CHECK(chi_square_uniform(counts).p_value > 0.01);
    }
    RandomStream s(1);
    CHECK_THROWS(pick_sl_naive(1.0, s));
}

TEST_CASE("pick_sl_naive: attempts at X = 20 track the lattice-to-group ratio")
{
    const double predicted =
        static_cast<double>(oracle::lattice_ball(4, 400).size()) / static_cast<double>(oracle::sl2z_count(400));
    RandomStream s(32);
    std::uint64_t attempts = 0;
    const int draws = 2000;
    for (int k = 0; k < draws; ++k)
        pick_sl_naive(20.0, s, &attempts);
    const double mean = static_cast<double>(attempts) / draws;
    MESSAGE("attempts per draw " << mean << ", predicted " << predicted);
    CHECK(mean < 4 * predicted);
    CHECK(mean > predicted / 4);
}

TEST_CASE("radius_schedule")
{
    CHECK(radius_schedule(std::sqrt(2.0), std::exp(-3.0)) == doctest::Approx(5.0).epsilon(1e-7));
    CHECK(radius_schedule(10.0, 0.1) == doctest::Approx(std::acosh(50.0) + std::log(10.0) + 2).epsilon(1e-14));
    CHECK(radius_schedule(5.0, 0.01) > radius_schedule(4.0, 0.01));
    CHECK(radius_schedule(5.0, 0.01) > radius_schedule(5.0, 0.1));
    CHECK_THROWS(radius_schedule(1.0, 0.1));
    CHECK_THROWS(radius_schedule(2.0, 0.0));
    CHECK_THROWS(radius_schedule(2.0, 1.0));
}

TEST_CASE("pick_fancy: contract and coverage")
{
    RandomStream s(41);
    std::map<Mat2Z, int> seen;
    FancyStats stats;
    for (int k = 0; k < 4000; ++k) {
        const Mat2Z A = pick_fancy(std::sqrt(2.0), 0.01, s, &stats);
        REQUIRE(A.det() == 1);
        REQUIRE(A.norm_sq() <= 2);
        ++seen[A];
    }
    CHECK(seen.size() == 4);
    CHECK(stats.iterations >= 4000);
    for (int k = 0; k < 2000; ++k) {
        const Mat2Z A = pick_fancy(5.0, 0.05, s);
        REQUIRE(A.det() == 1);
        REQUIRE(A.norm_sq() <= 25);
    }
}

TEST_CASE("pick_fancy: near-uniform at X = 2")
{
    const FancySampler sampler(2.0, 0.01);
    const auto counts = tally_sl2z(2.0, 20'000, 42, [&](RandomStream& s) { return sampler(s); });
    CHECK(chi_square_uniform(counts).p_value > 0.001);
}

TEST_CASE("double-precision filter never changes the output")
{
    for (double X : {std::sqrt(2.0), 5.0, 40.0}) {
        const FancySampler filtered(X, 0.05, 0, true);
        const FancySampler plain(X, 0.05, 0, false);
        RandomStream a(43), b(43);
        FancyStats sa, sb;
        for (int k = 0; k < 1000; ++k)
            REQUIRE(filtered(a, &sa) == plain(b, &sb));
        CHECK(sa.iterations == sb.iterations);
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("256-bit reduction gives the same draws as the default precision")
{
    const FancySampler standard(5.0, 0.1);
    const FancySampler wide(5.0, 0.1, 256, false);
    CHECK(wide.precision_bits() == 256);
    RandomStream a(44), b(44);
    for (int k = 0; k < 100; ++k)
        REQUIRE(standard(a) == wide(b));
}

TEST_CASE("FancySampler validates its arguments")
{
    CHECK_THROWS(FancySampler(1.0, 0.1));
    CHECK_THROWS(FancySampler(2.0, 1.5));
    CHECK_THROWS(FancySampler(2.0, 0.1, 512));
    CHECK(FancySampler(5.0, 0.01).precision_bits() == 76);
    CHECK(FancySampler(5.0, 0.01).iteration_cap() == 64 + 8 * 3);
}
