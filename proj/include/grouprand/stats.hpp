#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace grouprand {

/// Goodness-of-fit summary of a sampler against the uniform law on a
/// finite support.
struct SampleReport {
    std::string group_id;
    std::uint64_t support_size = 0;
    std::uint64_t draws = 0;
    double chi_square = 0.0;
    std::uint64_t dof = 0;
    double p_value = 1.0;
    double tv_estimate = 0.0;
};

/// Regularized upper incomplete gamma Q(a, x), accurate to ~1e-12 relative.
double gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_sf(double statistic, double dof);

/// Pearson test of counts (one entry per support element, zeros included)
/// against the uniform law. Throws if draws < 5 * support size.
SampleReport chi_square_uniform(std::span<const std::uint64_t> counts, std::string group_id = {});

/// Half the L1 distance between the empirical law and the uniform one.
double tv_distance(std::span<const std::uint64_t> counts);

struct TwoSampleResult {
    double statistic = 0.0;
    std::uint64_t dof = 0;
    double p_value = 1.0;
};

/// Chi-square test that two count vectors over the same support come from
/// one distribution. Cells empty in both samples are dropped.
TwoSampleResult chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Kolmogorov-Smirnov statistic sup |F_n - F| of a sample against a CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov tail P(D_n > d) with Stephens' small-sample correction.
double ks_p_value(double d, double effective_n);

/// Two-sample KS statistic and p-value.
TwoSampleResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Maps support elements to dense indices for counting.
template <class Key, class Hash = std::hash<Key>>
class Tally {
public:
    explicit Tally(const std::vector<Key>& support) : counts_(support.size(), 0)
    {
        index_.reserve(support.size());
        for (std::size_t k = 0; k < support.size(); ++k)
            index_.emplace(support[k], k);
        if (index_.size() != support.size())
            throw std::invalid_argument("Tally: support has duplicates");
    }

    /// Index of `key` in the support; throws if the key is outside it.
    std::size_t index_of(const Key& key) const
    {
        auto it = index_.find(key);
        if (it == index_.end())
            throw std::out_of_range("Tally: sample outside the support");
        return it->second;
    }

    void add(const Key& key) { ++counts_[index_of(key)]; }

    const std::vector<std::uint64_t>& counts() const { return counts_; }
    std::vector<std::uint64_t>& counts() { return counts_; }
    std::size_t support_size() const { return counts_.size(); }

private:
    std::unordered_map<Key, std::size_t, Hash> index_;
    std::vector<std::uint64_t> counts_;
};

} // namespace grouprand
