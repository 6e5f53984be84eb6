#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grouprand/rng.hpp"

namespace grouprand {

/// Prime field F_p, 2 <= p < 2^31.
class PrimeField {
public:
    /// Throws std::invalid_argument("p must be prime") otherwise.
    explicit PrimeField(std::uint64_t p);

    std::uint32_t p() const { return p_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const
    {
        const std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const
    {
        return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
    }
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
    /// Multiplicative inverse of a nonzero element.
    std::uint32_t inv(std::uint32_t a) const;
    std::uint32_t random(RandomStream& stream) const
    {
        return static_cast<std::uint32_t>(stream.uniform_index(p_));
    }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

/// Square matrix over F_p, row-major, entries in [0, p).
class FpMatrix {
public:
    FpMatrix(int n, PrimeField field);
    FpMatrix(int n, PrimeField field, std::vector<std::uint32_t> entries);

    static FpMatrix identity(int n, PrimeField field);

    int n() const { return n_; }
    const PrimeField& field() const { return field_; }
    const std::vector<std::uint32_t>& entries() const { return entries_; }

    std::uint32_t& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * n_ + j)]; }
    std::uint32_t operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * n_ + j)]; }

    std::uint32_t det() const;
    FpMatrix transpose() const;
    friend FpMatrix operator*(const FpMatrix& a, const FpMatrix& b);
    friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

    /// (n, p, entries row-major) as little-endian 32-bit words; equal
    /// matrices and only those share a key.
    std::string canonical_bytes() const;

private:
    int n_;
    PrimeField field_;
    std::vector<std::uint32_t> entries_;
};

struct FpMatrixHash {
    std::size_t operator()(const FpMatrix& m) const noexcept;
};

/// Uniform element of SL(n, p): uniform matrix until nonsingular, then the
/// first column is divided by the determinant.
FpMatrix gen_rand_sl(int n, const PrimeField& field, RandomStream& stream);

/// The form J = [[0, I], [-I, 0]] of size 2n; basis order x_1..x_n, y_1..y_n.
FpMatrix symplectic_form(int n, const PrimeField& field);

/// <u, v> = u^T J v.
std::uint32_t symplectic_pairing(const std::vector<std::uint32_t>& u, const std::vector<std::uint32_t>& v,
                                 const PrimeField& field);

struct SymplecticPair {
    std::vector<std::uint32_t> x;
    std::vector<std::uint32_t> y;
};

/// Component in W = span of the pairs: sum_j <v, y_j> x_j - <v, x_j> y_j.
/// The pairs must satisfy <x_j, y_j> = 1 with all other cross pairings 0;
/// throws std::invalid_argument otherwise.
std::vector<std::uint32_t> symplectic_project(const std::vector<std::uint32_t>& v,
                                              const std::vector<SymplecticPair>& pairs, const PrimeField& field);

bool is_symplectic(const FpMatrix& m);

/// Uniform element of Sp(2n, p) built from a random symplectic basis.
FpMatrix gen_rand_sp(int n, const PrimeField& field, RandomStream& stream);

/// Permutation of 1..n stored as its image list.
struct Permutation {
    std::vector<std::uint32_t> images;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;
};

struct PermutationHash {
    std::size_t operator()(const Permutation& p) const noexcept;
};

/// Uniform permutation (Fisher-Yates).
Permutation gen_perm(int n, RandomStream& stream);

/// Elementary transvections I +- E_ij (i != j), the walk's generating set.
std::vector<FpMatrix> transvection_generators(int n, const PrimeField& field);

/// Lazy random walk of `length` steps from the identity on the Cayley graph
/// of SL(n, p) with transvection generators: each step stays put with
/// probability 1/2, otherwise multiplies by a uniform generator.
FpMatrix expander_walk_sample(int n, const PrimeField& field, std::uint64_t length, RandomStream& stream);

/// Brute-force listings for tiny groups (p^(dim^2) <= 2^24).
std::vector<FpMatrix> enumerate_gl(int n, const PrimeField& field);
std::vector<FpMatrix> enumerate_sl(int n, const PrimeField& field);
std::vector<FpMatrix> enumerate_sp(int n, const PrimeField& field);

} // namespace grouprand
