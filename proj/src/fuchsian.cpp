#include "grouprand/fuchsian.hpp"

#include <cmath>
#include <string>

#include "json.hpp"

#include "grouprand/kernels.hpp"

namespace grouprand {

namespace {

constexpr double kMatrixTol = 1e-9;
constexpr double kDecreaseTol = 1e-12;

bool near(const Mobius<double>& x, const Mobius<double>& y, double sign)
{
    return std::abs(x.a - sign * y.a) <= kMatrixTol && std::abs(x.b - sign * y.b) <= kMatrixTol &&
           std::abs(x.c - sign * y.c) <= kMatrixTol && std::abs(x.d - sign * y.d) <= kMatrixTol;
}

bool same_transformation(const Mobius<double>& x, const Mobius<double>& y)
{
    return near(x, y, 1.0) || near(x, y, -1.0);
}

template <class Real>
Mobius<Real> convert(const Mobius<double>& m)
{
    return {Real(m.a), Real(m.b), Real(m.c), Real(m.d)};
}

} // namespace

GeneratorSet::GeneratorSet(std::vector<Mobius<double>> gens, HPoint basepoint)
    : gens_(std::move(gens)), basepoint_(basepoint)
{
    if (gens_.empty())
        throw std::invalid_argument("GeneratorSet: no generators");
    for (const auto& g : gens_) {
        if (!std::isfinite(g.a) || !std::isfinite(g.b) || !std::isfinite(g.c) || !std::isfinite(g.d))
            throw std::invalid_argument("GeneratorSet: non-finite entry");
        if (std::abs(g.det() - 1.0) > kMatrixTol)
            throw std::invalid_argument("GeneratorSet: generator determinant is not 1");
        if (same_transformation(g, Mobius<double>::identity()))
            throw std::invalid_argument("GeneratorSet: identity among generators");
        const Mobius<double> inv = g.inverse();
        bool found = false;
        for (const auto& h : gens_)
            found = found || same_transformation(h, inv);
        if (!found)
            throw std::invalid_argument("GeneratorSet: not closed under inverses");
    }
}

GeneratorSet sl2z_generator_set(HPoint basepoint)
{
    return GeneratorSet({{0.0, -1.0, 1.0, 0.0}, {1.0, 1.0, 0.0, 1.0}, {1.0, -1.0, 0.0, 1.0}}, basepoint);
}

GeneratorSet parse_generator_set(std::string_view json_text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("generator file: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("generators") || !doc.contains("basepoint"))
        throw std::invalid_argument("generator file: expected an object with \"generators\" and \"basepoint\"");
    try {
        std::vector<Mobius<double>> gens;
        for (const auto& m : doc.at("generators")) {
            if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
                throw std::invalid_argument("generator file: each generator must be [[a, b], [c, d]]");
            gens.push_back({m[0][0].get<double>(), m[0][1].get<double>(), m[1][0].get<double>(),
                            m[1][1].get<double>()});
        }
        const auto& b = doc.at("basepoint");
        if (b.size() != 2)
            throw std::invalid_argument("generator file: basepoint must be [re, im]");
        return GeneratorSet(std::move(gens), HPoint(b[0].get<double>(), b[1].get<double>()));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("generator file: ") + e.what());
    }
}

template <class Real>
ReductionTrace<Real> greedy_reduce(const BasicHPoint<Real>& x, const GeneratorSet& gset, std::uint64_t step_cap)
{
    std::vector<Mobius<Real>> gens;
    gens.reserve(gset.size());
    for (const auto& g : gset.gens())
        gens.push_back(convert<Real>(g));
    const auto b = gset.basepoint().template to<Real>();

    ReductionTrace<Real> trace{{}, 0, x, Mobius<Real>::identity()};
    double current = hdist(trace.final_point, b);
    for (;;) {
        std::size_t best = gens.size();
        double best_dist = current;
        BasicHPoint<Real> best_point = trace.final_point;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            BasicHPoint<Real> moved = mobius_apply(gens[i], trace.final_point);
            const double d = hdist(moved, b);
            if (d < best_dist) {
                best = i;
                best_dist = d;
                best_point = moved;
            }
        }
        if (best == gens.size() || !(best_dist < current - kDecreaseTol))
            return trace;
        if (trace.steps == step_cap)
            throw StepCapExceeded("greedy_reduce: step cap exceeded; the generator set may be bad or the group "
                                  "not geometrically finite");
        trace.final_point = best_point;
        trace.M = gens[best] * trace.M;
        trace.word.push_back(static_cast<std::uint32_t>(best));
        ++trace.steps;
        current = best_dist;
    }
}

template ReductionTrace<double> greedy_reduce(const BasicHPoint<double>&, const GeneratorSet&, std::uint64_t);
template ReductionTrace<DoubleDouble> greedy_reduce(const BasicHPoint<DoubleDouble>&, const GeneratorSet&,
                                                    std::uint64_t);

bool in_local_dirichlet_domain(const HPoint& x, const GeneratorSet& gset, double tol)
{
    const double d = hdist(x, gset.basepoint());
    for (const auto& g : gset.gens())
        if (d > hdist(mobius_apply(g, x), gset.basepoint()) + tol)
            return false;
    return true;
}

StepCountReport step_count_experiment(const GeneratorSet& gset, double R, std::uint64_t trials,
                                      const RandomStream& stream, std::uint64_t step_cap)
{
    if (!(R > 0.0) || trials == 0)
        throw std::invalid_argument("step_count_experiment: need R > 0 and at least one trial");
    const Mobius<double> to_base = isometry_from_i(gset.basepoint());
    const std::uint64_t seed = stream.split(0).next_u64();
    StepCountReport report;
    report.samples = kernels::parallel::sample_batch<StepCountSample>(seed, trials, [&](RandomStream& s) {
        const HPoint x = mobius_apply(to_base, pick_halfplane(R, s));
        return StepCountSample{hdist(x, gset.basepoint()), greedy_reduce(x, gset, step_cap).steps};
    });

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [d, steps] : report.samples) {
        const auto y = static_cast<double>(steps);
        sx += d;
        sy += y;
        sxx += d * d;
        sxy += d * y;
        report.max_steps = std::max(report.max_steps, steps);
    }
    const auto n = static_cast<double>(trials);
    report.mean_steps = sy / n;
    const double var = sxx - sx * sx / n;
    report.slope = var > 0 ? (sxy - sx * sy / n) / var : 0.0;
    report.intercept = (sy - report.slope * sx) / n;
    return report;
}

} // namespace grouprand
