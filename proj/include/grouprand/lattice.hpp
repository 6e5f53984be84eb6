#pragma once

#include <cstdint>
#include <vector>

#include "grouprand/rng.hpp"

namespace grouprand {

struct LatticeVector {
    std::vector<std::int64_t> coords;

    std::size_t dim() const { return coords.size(); }
    std::int64_t norm_sq() const;
    friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
};

/// Square integer matrix, row-major.
struct MatNZ {
    int n = 0;
    std::vector<std::int64_t> entries;

    std::int64_t& at(int i, int j) { return entries[static_cast<std::size_t>(i * n + j)]; }
    std::int64_t at(int i, int j) const { return entries[static_cast<std::size_t>(i * n + j)]; }
    std::int64_t frobenius_norm_sq() const;
    friend bool operator==(const MatNZ&, const MatNZ&) = default;
};

struct LatticeVectorHash {
    std::size_t operator()(const LatticeVector& v) const noexcept;
};

struct MatNZHash {
    std::size_t operator()(const MatNZ& m) const noexcept;
};

/// Largest integer k with k <= X^2, where X^2 is taken with a relative
/// slack of 1e-6 so that bounds typed to ~7 significant digits (e.g.
/// 1.4142135 for sqrt 2) still admit the lattice points they name.
std::int64_t squared_bound(double X);

/// Uniform point of the Euclidean n-ball of radius R.
std::vector<double> ball_point(int n, double R, RandomStream& stream);

/// Uniform over { v in Z^n : |v| <= X }: round a uniform point of the ball
/// of radius X + sqrt(n) to the nearest lattice point and reject if it falls
/// outside. `attempts`, if given, receives the number of continuous draws.
LatticeVector pick_lattice_vector(int n, double X, RandomStream& stream, std::uint64_t* attempts = nullptr);

/// Uniform n x n integer matrix with Frobenius norm at most X (row-major
/// reshape of a lattice vector in dimension n^2).
MatNZ pick_matrix(int n, double X, RandomStream& stream, std::uint64_t* attempts = nullptr);

/// Every lattice point of the closed ball, in lexicographic order.
std::vector<LatticeVector> enumerate_lattice_ball(int n, double X);

} // namespace grouprand
