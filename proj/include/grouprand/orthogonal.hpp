#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "grouprand/lattice.hpp"
#include "grouprand/rng.hpp"

namespace grouprand {

struct OrthoMatrix {
    Eigen::MatrixXd q;

    int n() const { return static_cast<int>(q.rows()); }
    /// max |Q^T Q - I|
    double orthogonality_defect() const;
};

/// Haar-distributed element of O(n): Householder QR of a standard Gaussian
/// matrix, columns flipped so that R has a positive diagonal.
OrthoMatrix random_orthogonal(int n, RandomStream& stream);

/// Uniform over the 2^n n! signed permutation matrices, i.e. O(n, Z).
MatNZ random_signed_permutation(int n, RandomStream& stream);

/// prod (b_j + 1) over primes p_j = 1 mod 4 with p_j^b_j || q, or 0 when
/// some prime = 3 mod 4 divides q to an odd power. This is r_2(q) / 4, the
/// number of (a, b) with a > 0, b >= 0 and a^2 + b^2 = q. Requires
/// 1 <= q <= 1e9.
std::uint64_t two_squares_count(std::int64_t q);

/// The rotation [[a/q, b/q], [-b/q, a/q]] with a^2 + b^2 = q^2,
/// gcd(a, b) = 1, q > 0.
struct RationalRotation {
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::int64_t q = 1;

    friend auto operator<=>(const RationalRotation&, const RationalRotation&) = default;
};

struct RationalRotationHash {
    std::size_t operator()(const RationalRotation& r) const noexcept;
};

/// All rational rotations with denominator at most Q (Q <= 1e4), sorted by
/// (q, a, b).
std::vector<RationalRotation> enumerate_rational_rotations(std::int64_t Q);

/// Uniform element of a precomputed rotation list.
class RationalRotationSampler {
public:
    explicit RationalRotationSampler(std::int64_t Q);

    const std::vector<RationalRotation>& support() const { return rotations_; }
    RationalRotation operator()(RandomStream& stream) const
    {
        return rotations_[stream.uniform_index(rotations_.size())];
    }

private:
    std::vector<RationalRotation> rotations_;
};

RationalRotation sample_rational_rotation(std::int64_t Q, RandomStream& stream);

/// #{ (a, b) in Z^2 : 0 < a^2 + b^2 <= Q^2, gcd(a, b) = 1 }, Q <= 1e4.
std::uint64_t visible_point_count(std::int64_t Q);

} // namespace grouprand
