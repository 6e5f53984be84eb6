#include "grouprand/finite_groups.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string_view>

namespace grouprand {

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

PrimeField::PrimeField(std::uint64_t p)
{
    if (p >= (1ULL << 31) || !is_prime(p))
        throw std::invalid_argument("p must be prime");
    p_ = static_cast<std::uint32_t>(p);
}

std::uint32_t PrimeField::pow(std::uint32_t a, std::uint64_t e) const
{
    std::uint32_t result = 1 % p_;
    while (e) {
        if (e & 1)
            result = mul(result, a);
        a = mul(a, a);
        e >>= 1;
    }
    return result;
}

std::uint32_t PrimeField::inv(std::uint32_t a) const
{
    if (a % p_ == 0)
        throw std::domain_error("PrimeField::inv: zero has no inverse");
    return pow(a, p_ - 2);
}

FpMatrix::FpMatrix(int n, PrimeField field)
    : n_(n), field_(field), entries_(static_cast<std::size_t>(n * n), 0)
{
    if (n < 1)
        throw std::invalid_argument("FpMatrix: dimension must be positive");
}

FpMatrix::FpMatrix(int n, PrimeField field, std::vector<std::uint32_t> entries)
    : n_(n), field_(field), entries_(std::move(entries))
{
    if (n < 1 || entries_.size() != static_cast<std::size_t>(n * n))
        throw std::invalid_argument("FpMatrix: entry count does not match dimension");
    for (auto e : entries_)
        if (e >= field_.p())
            throw std::invalid_argument("FpMatrix: entry outside [0, p)");
}

FpMatrix FpMatrix::identity(int n, PrimeField field)
{
    FpMatrix m(n, field);
    for (int i = 0; i < n; ++i)
        m(i, i) = 1 % field.p();
    return m;
}

std::uint32_t FpMatrix::det() const
{
    // Gaussian elimination on a copy
    std::vector<std::uint32_t> a = entries_;
    const auto& F = field_;
    auto at = [&](int i, int j) -> std::uint32_t& { return a[static_cast<std::size_t>(i * n_ + j)]; };
    std::uint32_t det = 1;
    for (int col = 0; col < n_; ++col) {
        int pivot = -1;
        for (int row = col; row < n_; ++row) {
            if (at(row, col) != 0) {
                pivot = row;
                break;
            }
        }
        if (pivot < 0)
            return 0;
        if (pivot != col) {
            for (int j = 0; j < n_; ++j)
                std::swap(at(pivot, j), at(col, j));
            det = F.neg(det);
        }
        const std::uint32_t pv = at(col, col);
        det = F.mul(det, pv);
        const std::uint32_t pinv = F.inv(pv);
        for (int row = col + 1; row < n_; ++row) {
            const std::uint32_t factor = F.mul(at(row, col), pinv);
            if (factor == 0)
                continue;
            for (int j = col; j < n_; ++j)
                at(row, j) = F.sub(at(row, j), F.mul(factor, at(col, j)));
        }
    }
    return det;
}

FpMatrix FpMatrix::transpose() const
{
    FpMatrix t(n_, field_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b)
{
    if (a.n_ != b.n_ || !(a.field_ == b.field_))
        throw std::invalid_argument("FpMatrix: shape or field mismatch");
    const int n = a.n_;
    const std::uint64_t p = a.field_.p();
    FpMatrix c(n, a.field_);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::uint64_t s = 0;
            for (int k = 0; k < n; ++k)
                s = (s + static_cast<std::uint64_t>(a(i, k)) * b(k, j)) % p;
            c(i, j) = static_cast<std::uint32_t>(s);
        }
    return c;
}

std::string FpMatrix::canonical_bytes() const
{
    std::string out;
    out.reserve(4 * (entries_.size() + 2));
    auto put = [&](std::uint32_t w) {
        for (int k = 0; k < 4; ++k)
            out.push_back(static_cast<char>((w >> (8 * k)) & 0xff));
    };
    put(static_cast<std::uint32_t>(n_));
    put(field_.p());
    for (auto e : entries_)
        put(e);
    return out;
}

std::size_t FpMatrixHash::operator()(const FpMatrix& m) const noexcept
{
    return std::hash<std::string_view>{}(m.canonical_bytes());
}

FpMatrix gen_rand_sl(int n, const PrimeField& field, RandomStream& stream)
{
    if (n < 1)
        throw std::invalid_argument("gen_rand_sl: dimension must be positive");
    FpMatrix m(n, field);
    for (;;) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = field.random(stream);
        const std::uint32_t d = m.det();
        if (d == 0)
            continue;
        const std::uint32_t dinv = field.inv(d);
        for (int i = 0; i < n; ++i)
            m(i, 0) = field.mul(m(i, 0), dinv);
        return m;
    }
}

FpMatrix symplectic_form(int n, const PrimeField& field)
{
    FpMatrix J(2 * n, field);
    for (int k = 0; k < n; ++k) {
        J(k, n + k) = 1 % field.p();
        J(n + k, k) = field.neg(1 % field.p());
    }
    return J;
}

std::uint32_t symplectic_pairing(const std::vector<std::uint32_t>& u, const std::vector<std::uint32_t>& v,
                                 const PrimeField& field)
{
    if (u.size() != v.size() || u.size() % 2 != 0)
        throw std::invalid_argument("symplectic_pairing: vectors must share an even length");
    const std::size_t n = u.size() / 2;
    std::uint32_t s = 0;
    for (std::size_t k = 0; k < n; ++k) {
        s = field.add(s, field.mul(u[k], v[n + k]));
        s = field.sub(s, field.mul(u[n + k], v[k]));
    }
    return s;
}

namespace {

void axpy(std::vector<std::uint32_t>& acc, std::uint32_t a, const std::vector<std::uint32_t>& x,
          const PrimeField& field)
{
    if (a == 0)
        return;
    for (std::size_t k = 0; k < acc.size(); ++k)
        acc[k] = field.add(acc[k], field.mul(a, x[k]));
}

std::vector<std::uint32_t> project_unchecked(const std::vector<std::uint32_t>& v,
                                             const std::vector<SymplecticPair>& pairs, const PrimeField& field)
{
    std::vector<std::uint32_t> out(v.size(), 0);
    for (const auto& [x, y] : pairs) {
        axpy(out, symplectic_pairing(v, y, field), x, field);
        axpy(out, field.neg(symplectic_pairing(v, x, field)), y, field);
    }
    return out;
}

} // namespace

std::vector<std::uint32_t> symplectic_project(const std::vector<std::uint32_t>& v,
                                              const std::vector<SymplecticPair>& pairs, const PrimeField& field)
{
    const std::uint32_t one = 1 % field.p();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].x.size() != v.size() || pairs[i].y.size() != v.size())
            throw std::invalid_argument("symplectic_project: dimension mismatch");
        if (symplectic_pairing(pairs[i].x, pairs[i].y, field) != one)
            throw std::invalid_argument("symplectic_project: pair does not satisfy <x, y> = 1");
        for (std::size_t j = 0; j < i; ++j) {
            const auto& a = pairs[i];
            const auto& b = pairs[j];
            if (symplectic_pairing(a.x, b.x, field) || symplectic_pairing(a.x, b.y, field) ||
                symplectic_pairing(a.y, b.x, field) || symplectic_pairing(a.y, b.y, field))
                throw std::invalid_argument("symplectic_project: pairs are not mutually orthogonal");
        }
    }
    return project_unchecked(v, pairs, field);
}

bool is_symplectic(const FpMatrix& m)
{
    if (m.n() % 2 != 0)
        return false;
    const FpMatrix J = symplectic_form(m.n() / 2, m.field());
    return m.transpose() * J * m == J;
}

FpMatrix gen_rand_sp(int n, const PrimeField& field, RandomStream& stream)
{
    if (n < 1)
        throw std::invalid_argument("gen_rand_sp: dimension must be positive");
    const std::size_t dim = static_cast<std::size_t>(2 * n);
    std::vector<SymplecticPair> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    auto random_vector = [&] {
        std::vector<std::uint32_t> v(dim);
        for (auto& e : v)
            e = field.random(stream);
        return v;
    };
    auto residual = [&](std::vector<std::uint32_t> v) {
        const auto w = project_unchecked(v, pairs, field);
        for (std::size_t k = 0; k < dim; ++k)
            v[k] = field.sub(v[k], w[k]);
        return v;
    };
    for (int i = 0; i < n; ++i) {
        for (;;) {
            auto x = residual(random_vector());
            auto y = residual(random_vector());
            const std::uint32_t c = symplectic_pairing(x, y, field);
            if (c == 0)
                continue;
            const std::uint32_t cinv = field.inv(c);
            for (auto& e : y)
                e = field.mul(e, cinv);
            pairs.push_back({std::move(x), std::move(y)});
            break;
        }
    }
    FpMatrix m(2 * n, field);
    for (int k = 0; k < n; ++k) {
        for (std::size_t r = 0; r < dim; ++r) {
            m(static_cast<int>(r), k) = pairs[static_cast<std::size_t>(k)].x[r];
            m(static_cast<int>(r), n + k) = pairs[static_cast<std::size_t>(k)].y[r];
        }
    }
    return m;
}

Permutation gen_perm(int n, RandomStream& stream)
{
    if (n < 1)
        throw std::invalid_argument("gen_perm: n must be positive");
    Permutation perm;
    perm.images.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        perm.images[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i + 1);
    for (int i = n; i >= 2; --i) {
        const auto j = stream.uniform_index(static_cast<std::uint64_t>(i));
        std::swap(perm.images[static_cast<std::size_t>(i - 1)], perm.images[j]);
    }
    return perm;
}

std::vector<FpMatrix> transvection_generators(int n, const PrimeField& field)
{
    std::vector<FpMatrix> gens;
    const std::uint32_t one = 1 % field.p();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j)
                continue;
            for (std::uint32_t t : {one, field.neg(one)}) {
                FpMatrix g = FpMatrix::identity(n, field);
                g(i, j) = t;
                gens.push_back(std::move(g));
            }
        }
    return gens;
}

FpMatrix expander_walk_sample(int n, const PrimeField& field, std::uint64_t length, RandomStream& stream)
{
    if (n < 2)
        throw std::invalid_argument("expander_walk_sample: dimension must be at least 2");
    const std::uint32_t one = 1 % field.p();
    const std::uint32_t minus_one = field.neg(one);
    const std::uint64_t gen_count = static_cast<std::uint64_t>(2 * n * (n - 1));
    FpMatrix m = FpMatrix::identity(n, field);
    for (std::uint64_t step = 0; step < length; ++step) {
        if (stream.coin())
            continue;
        // same ordering as transvection_generators: (i, j, +1), (i, j, -1), ...
        const std::uint64_t g = stream.uniform_index(gen_count);
        const std::uint32_t t = (g % 2 == 0) ? one : minus_one;
        const auto pair = static_cast<int>(g / 2);
        const int i = pair / (n - 1);
        int j = pair % (n - 1);
        if (j >= i)
            ++j;
        // right multiplication by I + t E_ij: column j += t * column i
        for (int r = 0; r < n; ++r)
            m(r, j) = field.add(m(r, j), field.mul(t, m(r, i)));
    }
    return m;
}

namespace {

template <class Keep>
std::vector<FpMatrix> enumerate_filtered(int dim, const PrimeField& field, Keep&& keep)
{
    const double cells = std::pow(static_cast<double>(field.p()), dim * dim);
    if (dim < 1 || cells > 16777216.0)
        throw std::invalid_argument("enumeration too large: need p^(dim^2) <= 2^24");
    const auto total = static_cast<std::uint64_t>(cells);
    std::vector<FpMatrix> out;
    FpMatrix m(dim, field);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        // most significant digit first gives row-major lexicographic order
        for (int k = dim * dim - 1; k >= 0; --k) {
            m(k / dim, k % dim) = static_cast<std::uint32_t>(c % field.p());
            c /= field.p();
        }
        if (keep(m))
            out.push_back(m);
    }
    return out;
}

} // namespace

std::vector<FpMatrix> enumerate_gl(int n, const PrimeField& field)
{
    return enumerate_filtered(n, field, [](const FpMatrix& m) { return m.det() != 0; });
}

std::vector<FpMatrix> enumerate_sl(int n, const PrimeField& field)
{
    return enumerate_filtered(n, field, [](const FpMatrix& m) { return m.det() == 1 % m.field().p(); });
}

std::vector<FpMatrix> enumerate_sp(int n, const PrimeField& field)
{
    const FpMatrix J = symplectic_form(n, field);
    return enumerate_filtered(2 * n, field, [&](const FpMatrix& m) { return m.transpose() * J * m == J; });
}

} // namespace grouprand

namespace grouprand {

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept
{
    std::uint64_t h = p.images.size();
    for (auto x : p.images)
        h = mix64(h ^ x);
    return static_cast<std::size_t>(h);
}

} // namespace grouprand
