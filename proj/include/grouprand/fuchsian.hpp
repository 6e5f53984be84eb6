#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "grouprand/hyperbolic.hpp"
#include "grouprand/rng.hpp"

namespace grouprand {

/// Generators of a Fuchsian group together with a Dirichlet basepoint.
/// Determinants must be 1 (within 1e-9), no generator may act as the
/// identity, and every inverse must appear (up to sign, since -I acts
/// trivially).
class GeneratorSet {
public:
    GeneratorSet(std::vector<Mobius<double>> gens, HPoint basepoint);

    const std::vector<Mobius<double>>& gens() const { return gens_; }
    const HPoint& basepoint() const { return basepoint_; }
    std::size_t size() const { return gens_.size(); }

private:
    std::vector<Mobius<double>> gens_;
    HPoint basepoint_;
};

/// {S, T, T^-1} with the given basepoint.
GeneratorSet sl2z_generator_set(HPoint basepoint = HPoint(0.0, 2.0));

/// Reads {"generators": [[[a, b], [c, d]], ...], "basepoint": [re, im]}.
GeneratorSet parse_generator_set(std::string_view json_text);

template <class Real>
struct ReductionTrace {
    std::vector<std::uint32_t> word; // indices into gens(), in application order
    std::uint64_t steps = 0;
    BasicHPoint<Real> final_point;
    Mobius<Real> M; // M x = final_point
};

class StepCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultGreedyStepCap = 1'000'000;

/// Greedy Dirichlet reduction: while some generator moves x strictly closer
/// to the basepoint (by more than 1e-12), apply the one giving the smallest
/// distance, lowest index first on ties.
template <class Real>
ReductionTrace<Real> greedy_reduce(const BasicHPoint<Real>& x, const GeneratorSet& gset,
                                   std::uint64_t step_cap = kDefaultGreedyStepCap);

/// Local Dirichlet condition: d(x, b) <= d(g x, b) + tol for every generator.
bool in_local_dirichlet_domain(const HPoint& x, const GeneratorSet& gset, double tol = 1e-9);

struct StepCountSample {
    double distance = 0.0; // d(x, b) before reduction
    std::uint64_t steps = 0;
};

struct StepCountReport {
    double mean_steps = 0.0;
    std::uint64_t max_steps = 0;
    double slope = 0.0; // least-squares steps per unit distance
    double intercept = 0.0;
    std::vector<StepCountSample> samples;
};

/// Reduces `trials` points uniform in the disk of radius R about the
/// basepoint. Each trial draws from its own stream derived from `stream`,
/// so the report does not depend on the thread count.
StepCountReport step_count_experiment(const GeneratorSet& gset, double R, std::uint64_t trials,
                                      const RandomStream& stream, std::uint64_t step_cap = kDefaultGreedyStepCap);

} // namespace grouprand
