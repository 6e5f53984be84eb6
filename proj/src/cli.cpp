#include "grouprand/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "grouprand/finite_groups.hpp"
#include "grouprand/fuchsian.hpp"
#include "grouprand/kernels.hpp"
#include "grouprand/lattice.hpp"
#include "grouprand/orthogonal.hpp"
#include "grouprand/record.hpp"
#include "grouprand/sl2z.hpp"
#include "grouprand/stats.hpp"

namespace grouprand {

namespace {

using nlohmann::ordered_json;

struct Options {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> count;
    std::string format = "jsonl";
    std::string out_path;

    int n = 2;
    std::uint64_t p = 0;
    double norm_bound = -1.0;
    double eps = 0.01;
    int precision_bits = 0;
    bool naive = false;
    bool matrix = false;
    bool integer = false;
    std::uint64_t length = 0;
    std::int64_t max_denominator = 0;
    std::int64_t max_radius = 0;
    std::string gens_path;
    std::string point;
    std::uint64_t step_cap = kDefaultGreedyStepCap;
};

class Output {
public:
    Output(std::ostream& out, RecordFormat format) : out_(out), format_(format) {}

    void record(const Record& r)
    {
        if (format_ == RecordFormat::csv && !header_done_) {
            out_ << record_csv_header() << '\n';
            header_done_ = true;
        }
        out_ << serialize(r, format_) << '\n';
    }

    void row(const ordered_json& row)
    {
        if (format_ == RecordFormat::jsonl) {
            out_ << to_jsonl(row) << '\n';
            return;
        }
        if (!header_done_) {
            out_ << csv_header(row) << '\n';
            header_done_ = true;
        }
        out_ << to_csv(row) << '\n';
    }

private:
    std::ostream& out_;
    RecordFormat format_;
    bool header_done_ = false;
};

std::string group_name(std::string_view base, int n, std::uint64_t p)
{
    return std::string(base) + "(" + std::to_string(n) + "," + std::to_string(p) + ")";
}

Record to_record(const Mat2Z& m)
{
    Record r{"SL2Z", {{m.a, m.b}, {m.c, m.d}}};
    r.meta["norm_sq"] = m.norm_sq();
    return r;
}

Record to_record(const FpMatrix& m, std::string group)
{
    Record r{std::move(group), {}};
    for (int i = 0; i < m.n(); ++i) {
        auto& row = r.matrix.emplace_back();
        for (int j = 0; j < m.n(); ++j)
            row.emplace_back(static_cast<std::int64_t>(m(i, j)));
    }
    r.meta["p"] = m.field().p();
    return r;
}

Record to_record(const MatNZ& m, std::string group)
{
    Record r{std::move(group), {}};
    for (int i = 0; i < m.n; ++i) {
        auto& row = r.matrix.emplace_back();
        for (int j = 0; j < m.n; ++j)
            row.emplace_back(m.at(i, j));
    }
    return r;
}

HPoint parse_point(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("--point must be re,im");
    try {
        std::size_t used_re = 0, used_im = 0;
        const std::string re = text.substr(0, comma);
        const std::string im = text.substr(comma + 1);
        const double x = std::stod(re, &used_re);
        const double y = std::stod(im, &used_im);
        if (used_re != re.size() || used_im != im.size())
            throw std::invalid_argument("");
        return HPoint(x, y);
    } catch (const std::logic_error&) {
        throw std::invalid_argument("--point must be re,im with im > 0");
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

template <class Draw>
void emit_batch(Output& output, std::uint64_t seed, std::uint64_t count, Draw&& draw)
{
    // bounded chunks keep memory flat; draw i is the same for any chunking
    constexpr std::uint64_t kChunk = 1 << 16;
    for (std::uint64_t first = 0; first < count; first += kChunk) {
        const auto size = static_cast<std::size_t>(std::min(kChunk, count - first));
        for (const auto& r : kernels::parallel::sample_range<Record>(seed, first, size, draw))
            output.record(r);
    }
}

template <class Key, class Hash, class Draw>
SampleReport run_stats(std::string group, const std::vector<Key>& support, std::uint64_t seed, std::uint64_t count,
                       Draw&& draw)
{
    const Tally<Key, Hash> tally(support);
    const auto counts = kernels::parallel::tally(seed, count, support.size(), draw,
                                                 [&](const Key& k) { return tally.index_of(k); });
    SampleReport report = chi_square_uniform(counts, std::move(group));
    return report;
}

std::vector<Permutation> all_permutations(int n)
{
    if (n < 1 || n > 8)
        throw std::invalid_argument("perm enumeration needs 1 <= n <= 8");
    Permutation perm;
    for (int i = 1; i <= n; ++i)
        perm.images.push_back(static_cast<std::uint32_t>(i));
    std::vector<Permutation> out;
    do
        out.push_back(perm);
    while (std::next_permutation(perm.images.begin(), perm.images.end()));
    return out;
}

void require_norm_bound(const Options& o)
{
    if (!(o.norm_bound >= 0.0))
        throw std::invalid_argument("--norm-bound is required and must be nonnegative");
}

using Handler = std::function<void(const Options&, std::uint64_t seed, Output&)>;

void sample_sl2z(const Options& o, std::uint64_t seed, Output& out)
{
    require_norm_bound(o);
    const std::uint64_t count = o.count.value_or(1);
    if (o.naive) {
        const double X = o.norm_bound;
        emit_batch(out, seed, count, [X](RandomStream& s) {
            Record r = to_record(pick_sl_naive(X, s));
            r.meta["method"] = "naive";
            return r;
        });
        return;
    }
    const FancySampler sampler(o.norm_bound, o.eps, o.precision_bits);
    emit_batch(out, seed, count, [&](RandomStream& s) {
        Record r = to_record(sampler(s));
        r.meta["method"] = "fancy";
        r.meta["eps"] = o.eps;
        return r;
    });
}

void sample_lattice(const Options& o, std::uint64_t seed, Output& out)
{
    require_norm_bound(o);
    const std::uint64_t count = o.count.value_or(1);
    if (o.matrix) {
        emit_batch(out, seed, count, [&](RandomStream& s) {
            const MatNZ m = pick_matrix(o.n, o.norm_bound, s);
            Record r = to_record(m, "M_" + std::to_string(o.n) + "(Z)");
            r.meta["norm_sq"] = m.frobenius_norm_sq();
            return r;
        });
        return;
    }
    emit_batch(out, seed, count, [&](RandomStream& s) {
        const LatticeVector v = pick_lattice_vector(o.n, o.norm_bound, s);
        Record r{"Z^" + std::to_string(o.n), {{}}};
        for (auto x : v.coords)
            r.matrix[0].emplace_back(x);
        r.meta["norm_sq"] = v.norm_sq();
        return r;
    });
}

void sample_slnp(const Options& o, std::uint64_t seed, Output& out)
{
    const PrimeField F(o.p);
    const std::string group = group_name("SL", o.n, o.p);
    emit_batch(out, seed, o.count.value_or(1),
               [&](RandomStream& s) { return to_record(gen_rand_sl(o.n, F, s), group); });
}

void sample_sp(const Options& o, std::uint64_t seed, Output& out)
{
    const PrimeField F(o.p);
    const std::string group = group_name("Sp", 2 * o.n, o.p);
    emit_batch(out, seed, o.count.value_or(1),
               [&](RandomStream& s) { return to_record(gen_rand_sp(o.n, F, s), group); });
}

void sample_perm(const Options& o, std::uint64_t seed, Output& out)
{
    if (o.n < 1)
        throw std::invalid_argument("--n must be positive");
    const std::string group = "S_" + std::to_string(o.n);
    emit_batch(out, seed, o.count.value_or(1), [&](RandomStream& s) {
        Record r{group, {{}}};
        for (auto x : gen_perm(o.n, s).images)
            r.matrix[0].emplace_back(static_cast<std::int64_t>(x));
        return r;
    });
}

void sample_walk(const Options& o, std::uint64_t seed, Output& out)
{
    const PrimeField F(o.p);
    const std::string group = group_name("SL", o.n, o.p);
    emit_batch(out, seed, o.count.value_or(1), [&](RandomStream& s) {
        Record r = to_record(expander_walk_sample(o.n, F, o.length, s), group);
        r.meta["walk_length"] = o.length;
        return r;
    });
}

void sample_orthogonal(const Options& o, std::uint64_t seed, Output& out)
{
    const std::string n = std::to_string(o.n);
    if (o.integer) {
        emit_batch(out, seed, o.count.value_or(1),
                   [&](RandomStream& s) { return to_record(random_signed_permutation(o.n, s), "O(" + n + ",Z)"); });
        return;
    }
    emit_batch(out, seed, o.count.value_or(1), [&](RandomStream& s) {
        const OrthoMatrix q = random_orthogonal(o.n, s);
        Record r{"O(" + n + ")", {}};
        for (int i = 0; i < o.n; ++i) {
            auto& row = r.matrix.emplace_back();
            for (int j = 0; j < o.n; ++j)
                row.emplace_back(q.q(i, j));
        }
        return r;
    });
}

void sample_so2_rational(const Options& o, std::uint64_t seed, Output& out)
{
    const RationalRotationSampler sampler(o.max_denominator);
    emit_batch(out, seed, o.count.value_or(1), [&](RandomStream& s) {
        const RationalRotation rot = sampler(s);
        // numerators over the common denominator q
        Record r{"SO_Q(2)", {{rot.a, rot.b}, {-rot.b, rot.a}}};
        r.meta["q"] = rot.q;
        return r;
    });
}

void count_sl2z_cmd(const Options& o, std::uint64_t, Output& out)
{
    require_norm_bound(o);
    const std::uint64_t n = count_sl2z(o.norm_bound);
    ordered_json row;
    row["target"] = "sl2z";
    row["norm_bound"] = o.norm_bound;
    row["count"] = n;
    row["ratio_to_x2"] = o.norm_bound > 0 ? static_cast<double>(n) / (o.norm_bound * o.norm_bound) : 0.0;
    out.row(row);
}

void count_visible_cmd(const Options& o, std::uint64_t, Output& out)
{
    const std::uint64_t n = visible_point_count(o.max_radius);
    const double q = static_cast<double>(o.max_radius);
    ordered_json row;
    row["target"] = "visible";
    row["max_radius"] = o.max_radius;
    row["count"] = n;
    row["ratio_to_asymptotic"] = q > 0 ? static_cast<double>(n) / (6.0 / std::numbers::pi * q * q) : 0.0;
    out.row(row);
}

void reduce_fuchsian_cmd(const Options& o, std::uint64_t, Output& out)
{
    const GeneratorSet gset = parse_generator_set(read_file(o.gens_path));
    const HPoint x = parse_point(o.point);
    const auto trace = greedy_reduce(x, gset, o.step_cap);
    std::string word;
    for (auto w : trace.word) {
        if (!word.empty())
            word += ' ';
        word += std::to_string(w);
    }
    ordered_json row;
    row["steps"] = trace.steps;
    row["word"] = word;
    row["final_re"] = trace.final_point.re;
    row["final_im"] = trace.final_point.im;
    row["a"] = trace.M.a;
    row["b"] = trace.M.b;
    row["c"] = trace.M.c;
    row["d"] = trace.M.d;
    row["distance_before"] = hdist(x, gset.basepoint());
    row["distance_after"] = hdist(trace.final_point, gset.basepoint());
    out.row(row);
}

void reduce_sl2z_cmd(const Options& o, std::uint64_t, Output& out)
{
    const auto reduced = reduce2(parse_point(o.point));
    ordered_json row;
    row["a"] = reduced.A.a;
    row["b"] = reduced.A.b;
    row["c"] = reduced.A.c;
    row["d"] = reduced.A.d;
    row["re"] = reduced.z0.re;
    row["im"] = reduced.z0.im;
    row["steps"] = reduced.steps;
    out.row(row);
}

constexpr std::uint64_t kDefaultStatsDraws = 100'000;

void stats_sl2z(const Options& o, std::uint64_t seed, Output& out)
{
    require_norm_bound(o);
    const auto support = enumerate_sl2z(o.norm_bound);
    const std::uint64_t count = o.count.value_or(kDefaultStatsDraws);
    SampleReport report;
    if (o.naive) {
        const double X = o.norm_bound;
        report = run_stats<Mat2Z, Mat2ZHash>("SL2Z naive", support, seed, count,
                                             [X](RandomStream& s) { return pick_sl_naive(X, s); });
    } else {
        const FancySampler sampler(o.norm_bound, o.eps, o.precision_bits);
        report = run_stats<Mat2Z, Mat2ZHash>("SL2Z fancy", support, seed, count,
                                             [&](RandomStream& s) { return sampler(s); });
    }
    out.row(to_row(report));
}

void stats_slnp(const Options& o, std::uint64_t seed, Output& out)
{
    const PrimeField F(o.p);
    out.row(to_row(run_stats<FpMatrix, FpMatrixHash>(group_name("SL", o.n, o.p), enumerate_sl(o.n, F), seed,
                                                     o.count.value_or(kDefaultStatsDraws),
                                                     [&](RandomStream& s) { return gen_rand_sl(o.n, F, s); })));
}

void stats_sp(const Options& o, std::uint64_t seed, Output& out)
{
    const PrimeField F(o.p);
    out.row(to_row(run_stats<FpMatrix, FpMatrixHash>(group_name("Sp", 2 * o.n, o.p), enumerate_sp(o.n, F), seed,
                                                     o.count.value_or(kDefaultStatsDraws),
                                                     [&](RandomStream& s) { return gen_rand_sp(o.n, F, s); })));
}

void stats_walk(const Options& o, std::uint64_t seed, Output& out)
{
    const PrimeField F(o.p);
    out.row(to_row(run_stats<FpMatrix, FpMatrixHash>(
        group_name("SL", o.n, o.p) + " walk L=" + std::to_string(o.length), enumerate_sl(o.n, F), seed,
        o.count.value_or(kDefaultStatsDraws),
        [&](RandomStream& s) { return expander_walk_sample(o.n, F, o.length, s); })));
}

void stats_perm(const Options& o, std::uint64_t seed, Output& out)
{
    out.row(to_row(run_stats<Permutation, PermutationHash>("S_" + std::to_string(o.n), all_permutations(o.n), seed,
                                                           o.count.value_or(kDefaultStatsDraws),
                                                           [&](RandomStream& s) { return gen_perm(o.n, s); })));
}

void stats_lattice(const Options& o, std::uint64_t seed, Output& out)
{
    require_norm_bound(o);
    out.row(to_row(run_stats<LatticeVector, LatticeVectorHash>(
        "Z^" + std::to_string(o.n), enumerate_lattice_ball(o.n, o.norm_bound), seed,
        o.count.value_or(kDefaultStatsDraws),
        [&](RandomStream& s) { return pick_lattice_vector(o.n, o.norm_bound, s); })));
}

void stats_so2_rational(const Options& o, std::uint64_t seed, Output& out)
{
    const RationalRotationSampler sampler(o.max_denominator);
    out.row(to_row(run_stats<RationalRotation, RationalRotationHash>(
        "SO_Q(2)", sampler.support(), seed, o.count.value_or(kDefaultStatsDraws),
        [&](RandomStream& s) { return sampler(s); })));
}

struct Target {
    CLI::App* app;
    Handler handler;
    bool random = true;
};

} // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app("Uniform random elements of matrix groups", "grouprand");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--seed", o.seed, "Random seed (drawn from entropy and reported when absent)");
    app.add_option("--count", o.count, "Number of draws");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"jsonl", "csv"}));
    app.add_option("--out", o.out_path, "Write output to this file instead of stdout");

    CLI::App* sample = app.add_subcommand("sample", "Draw random group elements");
    sample->require_subcommand(1);
    CLI::App* count = app.add_subcommand("count", "Exact counts");
    count->require_subcommand(1);
    CLI::App* reduce = app.add_subcommand("reduce", "Reduce a point to a fundamental domain");
    reduce->require_subcommand(1);
    CLI::App* stats = app.add_subcommand("stats", "Chi-square uniformity report against an enumeration");
    stats->require_subcommand(1);

    std::vector<Target> targets;
    auto add = [&](CLI::App* parent, const std::string& name, const std::string& help, Handler handler) {
        CLI::App* sub = parent->add_subcommand(name, help);
        targets.push_back({sub, std::move(handler), parent == sample || parent == stats});
        return sub;
    };
    auto norm_bound = [&](CLI::App* sub) {
        sub->add_option("--norm-bound", o.norm_bound, "Frobenius norm bound X")->required();
    };
    auto n_p = [&](CLI::App* sub) {
        sub->add_option("--n", o.n, "Dimension")->required();
        sub->add_option("--p", o.p, "Prime modulus")->required();
    };
    auto fancy = [&](CLI::App* sub) {
        norm_bound(sub);
        sub->add_option("--eps,--epsilon", o.eps, "Target distance from uniform (hyperbolic sampler)");
        sub->add_option("--precision-bits", o.precision_bits, "Working precision override");
        sub->add_flag("--naive", o.naive, "Use exact rejection sampling from the Euclidean ball");
    };

    fancy(add(sample, "sl2z", "SL(2,Z) with Frobenius norm at most X", sample_sl2z));
    {
        CLI::App* sub = add(sample, "lattice", "Lattice point of the n-ball", sample_lattice);
        sub->add_option("--n,--dim", o.n, "Dimension");
        sub->add_option("--norm-bound,--radius", o.norm_bound, "Ball radius X")->required();
        sub->add_flag("--matrix", o.matrix, "Sample an n x n integer matrix instead");
    }
    n_p(add(sample, "slnp", "SL(n,p)", sample_slnp));
    n_p(add(sample, "sp", "Sp(2n,p)", sample_sp));
    add(sample, "perm", "Permutation of 1..n", sample_perm)->add_option("--n", o.n, "Degree")->required();
    {
        CLI::App* sub = add(sample, "walk", "Endpoint of a lazy transvection walk on SL(n,p)", sample_walk);
        sub->add_option("--n", o.n, "Dimension");
        sub->add_option("--p", o.p, "Prime modulus")->required();
        sub->add_option("--length", o.length, "Walk length")->required();
    }
    {
        CLI::App* sub = add(sample, "orthogonal", "Haar-random O(n)", sample_orthogonal);
        sub->add_option("--n", o.n, "Dimension")->required();
        sub->add_flag("--integer", o.integer, "Signed permutation matrices, O(n,Z)");
    }
    add(sample, "so2-rational", "Rational rotation with denominator at most Q", sample_so2_rational)
        ->add_option("--max-denominator", o.max_denominator, "Q")
        ->required();

    norm_bound(add(count, "sl2z", "|{A in SL(2,Z) : |A| <= X}|", count_sl2z_cmd));
    add(count, "visible", "Visible lattice points in the disk of radius Q", count_visible_cmd)
        ->add_option("--max-radius", o.max_radius, "Q")
        ->required();

    {
        CLI::App* sub = add(reduce, "fuchsian", "Greedy Dirichlet reduction", reduce_fuchsian_cmd);
        sub->add_option("--gens", o.gens_path, "Generator file (JSON)")->required();
        sub->add_option("--point", o.point, "re,im")->required();
        sub->add_option("--step-cap", o.step_cap, "Maximum greedy steps");
    }
    add(reduce, "sl2z", "Reduction into the SL(2,Z) fundamental domain", reduce_sl2z_cmd)
        ->add_option("--point", o.point, "re,im")
        ->required();

    fancy(add(stats, "sl2z", "SL(2,Z) sampler", stats_sl2z));
    n_p(add(stats, "slnp", "gen_rand_sl", stats_slnp));
    n_p(add(stats, "sp", "gen_rand_sp", stats_sp));
    {
        CLI::App* sub = add(stats, "walk", "Transvection walk", stats_walk);
        sub->add_option("--n", o.n, "Dimension");
        sub->add_option("--p", o.p, "Prime modulus")->required();
        sub->add_option("--length", o.length, "Walk length")->required();
    }
    add(stats, "perm", "Permutations", stats_perm)->add_option("--n", o.n, "Degree")->required();
    {
        CLI::App* sub = add(stats, "lattice", "Lattice-ball sampler", stats_lattice);
        sub->add_option("--n,--dim", o.n, "Dimension");
        sub->add_option("--norm-bound,--radius", o.norm_bound, "Ball radius X")->required();
    }
    add(stats, "so2-rational", "Rational rotations", stats_so2_rational)
        ->add_option("--max-denominator", o.max_denominator, "Q")
        ->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* shown = &app;
        for (const auto& t : targets)
            if (t.app->parsed())
                shown = t.app;
        for (CLI::App* group : {sample, count, reduce, stats})
            if (group->parsed() && shown == &app)
                shown = group;
        out << shown->help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    const Target* chosen = nullptr;
    for (const auto& t : targets)
        if (t.app->parsed())
            chosen = &t;
    if (!chosen) {
        err << app.help();
        return 2;
    }

    try {
        const RecordFormat format = parse_record_format(o.format);
        std::uint64_t seed = 0;
        if (o.seed) {
            seed = *o.seed;
        } else if (chosen->random) {
            seed = entropy_seed();
            err << "seed " << seed << '\n';
        }
        std::ofstream file;
        if (!o.out_path.empty()) {
            file.open(o.out_path);
            if (!file)
                throw std::runtime_error("cannot open " + o.out_path + " for writing");
        }
        Output output(o.out_path.empty() ? out : file, format);
        chosen->handler(o, seed, output);
        if (file.is_open() && !file)
            throw std::runtime_error("write to " + o.out_path + " failed");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace grouprand
