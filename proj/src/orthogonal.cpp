#include "grouprand/orthogonal.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "grouprand/finite_groups.hpp"
#include "grouprand/kernels.hpp"

namespace grouprand {

namespace {

constexpr std::int64_t kMaxFactor = 1'000'000'000;
constexpr std::int64_t kMaxDenominator = 10'000;

} // namespace

double OrthoMatrix::orthogonality_defect() const
{
    const Eigen::MatrixXd gram = q.transpose() * q - Eigen::MatrixXd::Identity(q.rows(), q.cols());
    return gram.cwiseAbs().maxCoeff();
}

OrthoMatrix random_orthogonal(int n, RandomStream& stream)
{
    if (n < 1)
        throw std::invalid_argument("random_orthogonal: n must be positive");
    Eigen::MatrixXd x(n, n);
    for (;;) {
        double* data = x.data();
        const Eigen::Index size = x.size();
        for (Eigen::Index k = 0; k < size; k += 2) {
            const auto [g0, g1] = gaussian_pair(stream);
            data[k] = g0;
            if (k + 1 < size)
                data[k + 1] = g1;
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
        const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        const double scale = r.diagonal().cwiseAbs().maxCoeff();
        if (!(r.diagonal().cwiseAbs().minCoeff() > 1e-12 * scale))
            continue;
        Eigen::MatrixXd q = qr.householderQ();
        for (int j = 0; j < n; ++j)
            if (r(j, j) < 0)
                q.col(j) = -q.col(j);
        return {std::move(q)};
    }
}

MatNZ random_signed_permutation(int n, RandomStream& stream)
{
    const Permutation perm = gen_perm(n, stream);
    MatNZ m{n, std::vector<std::int64_t>(static_cast<std::size_t>(n * n), 0)};
    for (int i = 0; i < n; ++i)
        m.at(i, static_cast<int>(perm.images[static_cast<std::size_t>(i)]) - 1) = stream.coin() ? 1 : -1;
    return m;
}

std::uint64_t two_squares_count(std::int64_t q)
{
    if (q < 1 || q > kMaxFactor)
        throw std::invalid_argument("two_squares_count: q must lie in [1, 1e9]");
    std::uint64_t count = 1;
    for (std::int64_t p = 2; p * p <= q; ++p) {
        if (q % p != 0)
            continue;
        int e = 0;
        while (q % p == 0) {
            q /= p;
            ++e;
        }
        if (p % 4 == 1)
            count *= static_cast<std::uint64_t>(e + 1);
        else if (p % 4 == 3 && e % 2 == 1)
            return 0;
    }
    if (q > 1) {
        if (q % 4 == 1)
            count *= 2;
        else if (q % 4 == 3)
            return 0;
    }
    return count;
}

std::vector<RationalRotation> enumerate_rational_rotations(std::int64_t Q)
{
    if (Q < 1 || Q > kMaxDenominator)
        throw std::invalid_argument("enumerate_rational_rotations: Q must lie in [1, 1e4]");
    std::vector<RationalRotation> out = {{1, 0, 1}, {-1, 0, 1}, {0, 1, 1}, {0, -1, 1}};
    for (std::int64_t m = 2; m * m + 1 <= Q; ++m) {
        for (std::int64_t k = 1; k < m; ++k) {
            const std::int64_t q = m * m + k * k;
            if (q > Q)
                break;
            if ((m - k) % 2 == 0 || std::gcd(m, k) != 1)
                continue;
            const std::int64_t u = m * m - k * k;
            const std::int64_t v = 2 * m * k;
            for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}})
                for (std::int64_t sa : {1, -1})
                    for (std::int64_t sb : {1, -1})
                        out.push_back({sa * a, sb * b, q});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

RationalRotationSampler::RationalRotationSampler(std::int64_t Q) : rotations_(enumerate_rational_rotations(Q)) {}

RationalRotation sample_rational_rotation(std::int64_t Q, RandomStream& stream)
{
    return RationalRotationSampler(Q)(stream);
}

std::uint64_t visible_point_count(std::int64_t Q)
{
    if (Q < 0 || Q > kMaxDenominator)
        throw std::invalid_argument("visible_point_count: Q must lie in [0, 1e4]");
    return kernels::parallel::visible_points(Q);
}

} // namespace grouprand

namespace grouprand {

std::size_t RationalRotationHash::operator()(const RationalRotation& r) const noexcept
{
    std::uint64_t h = mix64(static_cast<std::uint64_t>(r.q));
    h = mix64(h ^ static_cast<std::uint64_t>(r.a));
    return static_cast<std::size_t>(mix64(h ^ static_cast<std::uint64_t>(r.b)));
}

} // namespace grouprand
