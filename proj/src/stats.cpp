#include "grouprand/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace grouprand {

namespace {

constexpr double kGammaEps = 1e-15;
constexpr int kGammaMaxIter = 100000;

// P(a, x) by its power series; valid for x < a + 1.
double gamma_p_series(double a, double x)
{
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kGammaMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kGammaEps)
            break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by Lentz's continued fraction; valid for x >= a + 1.
double gamma_q_fraction(double a, double x)
{
    constexpr double tiny = std::numeric_limits<double>::min() / kGammaEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kGammaMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kGammaEps)
            break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

std::uint64_t total_of(std::span<const std::uint64_t> counts)
{
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

} // namespace

double gamma_q(double a, double x)
{
    if (!(a > 0.0) || x < 0.0)
        throw std::invalid_argument("gamma_q: need a > 0 and x >= 0");
    if (x == 0.0)
        return 1.0;
    if (x < a + 1.0)
        return 1.0 - gamma_p_series(a, x);
    return gamma_q_fraction(a, x);
}

double chi_square_sf(double statistic, double dof) { return gamma_q(0.5 * dof, 0.5 * std::max(0.0, statistic)); }

SampleReport chi_square_uniform(std::span<const std::uint64_t> counts, std::string group_id)
{
    const std::uint64_t k = counts.size();
    const std::uint64_t n = total_of(counts);
    if (k < 2)
        throw std::invalid_argument("chi_square_uniform: support must have at least two elements");
    if (n < 5 * k)
        throw std::invalid_argument("chi_square_uniform: need at least 5 draws per support element");
    const double expected = static_cast<double>(n) / static_cast<double>(k);
    double stat = 0.0;
    for (auto c : counts) {
        const double diff = static_cast<double>(c) - expected;
        stat += diff * diff / expected;
    }
    SampleReport report;
    report.group_id = std::move(group_id);
    report.support_size = k;
    report.draws = n;
    report.chi_square = stat;
    report.dof = k - 1;
    report.p_value = chi_square_sf(stat, static_cast<double>(k - 1));
    report.tv_estimate = tv_distance(counts);
    return report;
}

double tv_distance(std::span<const std::uint64_t> counts)
{
    const std::uint64_t n = total_of(counts);
    if (n == 0)
        throw std::invalid_argument("tv_distance: no draws");
    const double p = 1.0 / static_cast<double>(counts.size());
    double sum = 0.0;
    for (auto c : counts)
        sum += std::abs(static_cast<double>(c) / static_cast<double>(n) - p);
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

TwoSampleResult chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("chi_square_two_sample: supports differ");
    const double na = static_cast<double>(total_of(a));
    const double nb = static_cast<double>(total_of(b));
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("chi_square_two_sample: empty sample");
    const double n = na + nb;
    double stat = 0.0;
    std::uint64_t cells = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double row = static_cast<double>(a[k] + b[k]);
        if (row == 0.0)
            continue;
        ++cells;
        const double ea = row * na / n;
        const double eb = row * nb / n;
        stat += (a[k] - ea) * (a[k] - ea) / ea + (b[k] - eb) * (b[k] - eb) / eb;
    }
    if (cells < 2)
        return {0.0, 0, 1.0};
    return {stat, cells - 1, chi_square_sf(stat, static_cast<double>(cells - 1))};
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf)
{
    if (sample.empty())
        throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

double ks_p_value(double d, double effective_n)
{
    const double sn = std::sqrt(effective_n);
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 0.2)
        return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16)
            break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TwoSampleResult ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v)
            ++i;
        while (j < b.size() && b[j] == v)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return {d, 0, ks_p_value(d, na * nb / (na + nb))};
}

} // namespace grouprand
