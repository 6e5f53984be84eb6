// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "grouprand/finite_groups.hpp"
#include "grouprand/fuchsian.hpp"
#include "grouprand/kernels.hpp"
#include "grouprand/lattice.hpp"
#include "grouprand/orthogonal.hpp"
#include "grouprand/sl2z.hpp"
#include "grouprand/stats.hpp"
#include "oracles.hpp"

using namespace grouprand;
namespace par = grouprand::kernels::parallel;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " FAILED[" << what << "]";
        }
    }
};

template <class Key, class Hash, class Draw>
std::vector<std::uint64_t> tally(const std::vector<Key>& support, std::uint64_t seed, std::uint64_t draws, Draw draw)
{
    const Tally<Key, Hash> index(support);
    return par::tally(seed, draws, support.size(), draw, [&](const Key& k) { return index.index_of(k); });
}

double angle_of(double x, double y)
{
    const double a = std::atan2(y, x);
    return a < 0 ? a + 2 * std::numbers::pi : a;
}

// reduce2 of both points lands on one representative, up to the boundary
// identifications Re = -1/2 ~ 1/2 and z ~ -1/z on the unit circle
bool same_orbit(const HPoint& x, const HPoint& y)
{
    const HPoint a = reduce2(x.to<DoubleDouble>()).z0.to<double>();
    const HPoint b = reduce2(y.to<DoubleDouble>()).z0.to<double>();
    for (const Mat2Z& g : {Mat2Z::identity(), Mat2Z::T(), Mat2Z::T(-1), Mat2Z::S()}) {
        const HPoint ga = apply(g, a);
        if (std::hypot(ga.re - b.re, ga.im - b.im) <= 1e-9)
            return true;
    }
    return false;
}

void sl2z_count_law(Outcome& o)
{
    const auto n_sqrt2 = enumerate_sl2z(std::sqrt(2.0)).size();
    const auto n_2 = enumerate_sl2z(2.0).size();
    const auto oracle_sqrt2 = oracle::sl2z(2).size();
    const auto oracle_2 = oracle::sl2z(4).size();
    o.require(n_sqrt2 == 4 && oracle_sqrt2 == 4, "N(sqrt2) = 4");
    // 4 of norm^2 2 plus 16 of norm^2 3
    o.require(n_2 == oracle_2, "N(2) matches brute force");
    const double ratio = static_cast<double>(count_sl2z(200.0)) / 40'000.0;
    o.require(ratio >= 5.5 && ratio <= 6.5, "N(200)/200^2 in [5.5, 6.5]");
    o.detail << "N(sqrt2)=" << n_sqrt2 << " N(2)=" << n_2 << " (brute force " << oracle_2
             << ") N(200)/X^2=" << ratio;
}

void fancy_near_uniform(Outcome& o)
{
    const FancySampler five(5.0, 0.01);
    const auto support = enumerate_sl2z(5.0);
    const auto counts = tally<Mat2Z, Mat2ZHash>(support, 1001, 1'000'000, [&](RandomStream& s) { return five(s); });
    const SampleReport r = chi_square_uniform(counts);
    o.require(r.tv_estimate <= 0.02, "TV <= 0.02");
    o.require(r.p_value > 0.001, "chi-square p > 0.001");

    const FancySampler tiny(std::sqrt(2.0), 0.01);
    const auto four = enumerate_sl2z(std::sqrt(2.0));
    const auto c4 = tally<Mat2Z, Mat2ZHash>(four, 1002, 100'000, [&](RandomStream& s) { return tiny(s); });
    double worst = 0;
    for (auto c : c4)
        worst = std::max(worst, std::abs(static_cast<double>(c) / 100'000 - 0.25));
    o.require(c4.size() == 4 && worst <= 0.01, "X=sqrt2 frequencies within 0.25 +- 0.01");
    o.detail << "X=5 support=" << support.size() << " TV=" << r.tv_estimate << " p=" << r.p_value
             << "; X=sqrt2 max|f-0.25|=" << worst;
}

void naive_vs_fancy(Outcome& o)
{
    const auto support = enumerate_sl2z(3.0);
    const FancySampler fancy(3.0, 0.01);
    const auto a = tally<Mat2Z, Mat2ZHash>(support, 1003, 100'000,
                                           [](RandomStream& s) { return pick_sl_naive(3.0, s); });
    const auto b = tally<Mat2Z, Mat2ZHash>(support, 1004, 100'000, [&](RandomStream& s) { return fancy(s); });
    const TwoSampleResult t = chi_square_two_sample(a, b);
    o.require(t.p_value > 0.01, "two-sample p > 0.01");
    o.detail << "support=" << support.size() << " chi2=" << t.statistic << " dof=" << t.dof << " p=" << t.p_value;
}

void cost_accuracy(Outcome& o)
{
    std::vector<double> per_inverse_eps;
    for (double eps : {0.1, 0.03, 0.01}) {
        const FancySampler sampler(5.0, eps);
        RandomStream s(1005);
        FancyStats stats;
        const int draws = 20'000;
        for (int k = 0; k < draws; ++k)
            sampler(s, &stats);
        const double mean = static_cast<double>(stats.iterations) / draws;
        per_inverse_eps.push_back(mean * eps);
        o.detail << "eps=" << eps << " mean_iter=" << mean << "; ";
    }
    const auto [lo, hi] = std::minmax_element(per_inverse_eps.begin(), per_inverse_eps.end());
    o.require(*hi / *lo <= 3.0, "iterations * eps within factor 3");
    o.detail << "spread of iterations*eps=" << *hi / *lo;
}

void geometry_identity(Outcome& o)
{
    const auto all = enumerate_sl2z(100.0);
    o.require(all.size() == oracle::sl2z_count(10'000), "set size matches brute-force count");
    double worst = 0;
    for (const Mat2Z& A : all)
        worst = std::max(worst, std::abs(translation_distance(A) - hdist(HPoint::i(), apply(A, HPoint::i()))));
    o.require(worst <= 1e-9, "max error <= 1e-9");
    o.detail << "matrices=" << all.size() << " max|d - hdist|=" << worst;
}

void reduction_correctness(Outcome& o)
{
    RandomStream s(1006);
    const int cap = reduction_cap_for_distance(20.0);
    int cap_hits = 0, bad_domain = 0, bad_image = 0;
    double worst_image = 0;
    for (int k = 0; k < 10'000; ++k) {
        const HPointDD z = pick_halfplane<DoubleDouble>(20.0, s);
        const auto r = reduce2_bounded(z, cap);
        if (r.status != ReduceStatus::ok) {
            ++cap_hits;
            continue;
        }
        const double x = to_double(r.re), y = to_double(r.im);
        if (std::abs(x) > 0.5 + 1e-12 || x * x + y * y < 1 - 1e-12 || r.A.det() != 1)
            ++bad_domain;
        const HPointBig exact = apply(r.A, z.to<BigFloat>());
        const BigFloat dx = exact.re - widen<BigFloat>(r.re), dy = exact.im - widen<BigFloat>(r.im);
        const double err = to_double(BigFloat(sqrt(dx * dx + dy * dy)));
        worst_image = std::max(worst_image, err);
        bad_image += err > 1e-9;
    }
    o.require(cap_hits == 0, "no iteration-cap hits");
    o.require(bad_domain == 0, "outputs in the fundamental domain");
    o.require(bad_image == 0, "A z = z0 within 1e-9");
    o.detail << "points=10000 cap_hits=" << cap_hits << " outside=" << bad_domain << " max|Az-z0|=" << worst_image;
}

void lattice_uniformity(Outcome& o)
{
    for (auto [n, X, draws] : {std::tuple{2, 1.0, 100'000u}, std::tuple{4, 3.0, 1'000'000u}}) {
        const auto support = enumerate_lattice_ball(n, X);
        const std::int64_t b = squared_bound(X);
        o.require(support.size() == oracle::lattice_ball(n, b).size(), "enumeration matches brute force");
        const auto counts = tally<LatticeVector, LatticeVectorHash>(
            support, 1007 + n, draws, [n, X](RandomStream& s) { return pick_lattice_vector(n, X, s); });
        const SampleReport r = chi_square_uniform(counts);
        o.require(r.p_value > 0.01, "chi-square p > 0.01");
        std::uint64_t shell = 0, shell_points = 0;
        for (std::size_t k = 0; k < support.size(); ++k)
            if (support[k].norm_sq() == b) {
                shell += counts[k];
                ++shell_points;
            }
        const double p = static_cast<double>(shell_points) / support.size();
        const double sigma = std::sqrt(p * (1 - p) / draws);
        const double z = (static_cast<double>(shell) / draws - p) / sigma;
        o.require(std::abs(z) < 3, "boundary shell within 3 sigma");
        o.detail << "(n=" << n << ",X=" << X << ") points=" << support.size() << " p=" << r.p_value
                 << " shell z=" << z << "; ";
    }
}

void finite_groups(Outcome& o)
{
    const PrimeField F2(2), F3(3);
    const auto check = [&](const char* name, const std::vector<FpMatrix>& support, std::size_t want,
                           std::uint64_t draws, std::uint64_t seed, auto draw) {
        const auto counts = tally<FpMatrix, FpMatrixHash>(support, seed, draws, draw);
        const double p = chi_square_uniform(counts).p_value;
        o.require(support.size() == want, std::string(name) + " order");
        o.require(p > 0.01, std::string(name) + " p > 0.01");
        o.detail << name << ": |G|=" << support.size() << " p=" << p << "; ";
    };
    check("SL(2,2)", enumerate_sl(2, F2), 6, 100'000, 1010, [&](RandomStream& s) { return gen_rand_sl(2, F2, s); });
    check("SL(2,3)", enumerate_sl(2, F3), 24, 100'000, 1011, [&](RandomStream& s) { return gen_rand_sl(2, F3, s); });
    check("Sp(2,3)", enumerate_sp(1, F3), 24, 100'000, 1012, [&](RandomStream& s) { return gen_rand_sp(1, F3, s); });
    const auto sp42 = enumerate_sp(2, F2);
    o.require(sp42.size() == oracle::symplectic_group(2, 2).size(), "Sp(4,2) enumeration matches brute force");
    check("Sp(4,2)", sp42, 720, 1'000'000, 1013, [&](RandomStream& s) { return gen_rand_sp(2, F2, s); });

    RandomStream s(1014);
    int broken = 0;
    for (int k = 0; k < 20'000; ++k) {
        broken += !is_symplectic(gen_rand_sp(1 + k % 3, k % 2 ? F3 : PrimeField(7), s));
        broken += !is_symplectic(gen_rand_sp(2, F2, s));
    }
    o.require(broken == 0, "M^T J M = J");
    o.detail << "form violations=" << broken;
}

void expander_walk(Outcome& o)
{
    const PrimeField F3(3);
    const auto support = enumerate_sl(2, F3);
    const std::uint64_t walks = 1'000'000;
    std::vector<double> tv;
    for (std::uint64_t L : {5u, 15u, 50u}) {
        const auto counts = tally<FpMatrix, FpMatrixHash>(
            support, 1020 + L, walks, [&](RandomStream& s) { return expander_walk_sample(2, F3, L, s); });
        tv.push_back(tv_distance(counts));
    }
    const double noise = 0.5 * std::sqrt(24.0 / walks);
    o.require(tv[2] <= 0.05, "TV at L=50 <= 0.05");
    o.require(tv[1] <= tv[0] + 3 * noise && tv[2] <= tv[1] + 3 * noise, "TV decreasing");
    o.detail << "TV L=5: " << tv[0] << " L=15: " << tv[1] << " L=50: " << tv[2];
}

void orthogonal(Outcome& o)
{
    RandomStream s(1030);
    double defect = 0;
    for (int k = 0; k < 1000; ++k)
        defect = std::max(defect, random_orthogonal(4, s).orthogonality_defect());
    o.require(defect <= 1e-12, "Q^T Q = I within 1e-12");

    const auto angles = par::sample_batch<double>(1031, 100'000, [](RandomStream& r) {
        const OrthoMatrix q = random_orthogonal(2, r);
        return angle_of(q.q(0, 0), q.q(1, 0));
    });
    const double ks = ks_statistic(angles, [](double a) { return a / (2 * std::numbers::pi); });
    o.require(ks < 0.01, "angle KS < 0.01");

    int mismatches = 0;
    for (std::int64_t q = 1; q <= 10'000; ++q)
        mismatches += two_squares_count(q) != oracle::two_squares(q);
    o.require(mismatches == 0, "two_squares_count matches brute force");

    const double ratio = static_cast<double>(visible_point_count(1000)) / (6 / std::numbers::pi * 1e6);
    o.require(ratio >= 0.98 && ratio <= 1.02, "visible ratio in [0.98, 1.02]");
    o.detail << "defect=" << defect << " KS=" << ks << " two-squares mismatches=" << mismatches
             << " visible(1000)/(6/pi 1e6)=" << ratio;
}

void fuchsian(Outcome& o)
{
    const GeneratorSet gens = sl2z_generator_set(HPoint(0.0, 2.0));
    const Mobius<double> to_base = isometry_from_i(gens.basepoint());
    RandomStream s(1040);
    int capped = 0, not_dirichlet = 0, wrong_orbit = 0;
    std::size_t most_steps = 0;
    for (int k = 0; k < 1000; ++k) {
        const HPoint x = mobius_apply(to_base, pick_halfplane(10.0, s));
        try {
            const auto t = greedy_reduce(x, gens);
            most_steps = std::max(most_steps, t.steps);
            not_dirichlet += !in_local_dirichlet_domain(t.final_point, gens);
            wrong_orbit += !same_orbit(x, t.final_point);
        } catch (const StepCapExceeded&) {
            ++capped;
        }
    }
    o.require(capped == 0, "all reductions under the step cap");
    o.require(not_dirichlet == 0, "local Dirichlet condition");
    o.require(wrong_orbit == 0, "orbit agrees with reduce2");
    o.detail << "reductions=1000 capped=" << capped << " non-Dirichlet=" << not_dirichlet
             << " orbit mismatches=" << wrong_orbit << " max steps=" << most_steps;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
        {"SL(2,Z) count law", sl2z_count_law},
        {"pick_fancy near-uniformity", fancy_near_uniform},
        {"naive vs fancy agreement", naive_vs_fancy},
        {"cost-accuracy law", cost_accuracy},
        {"geometry identity", geometry_identity},
        {"reduction correctness", reduction_correctness},
        {"lattice-ball uniformity", lattice_uniformity},
        {"finite groups", finite_groups},
        {"expander walk", expander_walk},
        {"orthogonal", orthogonal},
        {"Fuchsian greedy reduction", fuchsian},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[k].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("%s %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    o.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
