// Exact integer lattices held in Hermite normal form.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace w3 {

using Int = mpz_class;
using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;  // row-major

// Row-style HNF: nonzero rows only, strictly increasing pivot columns, positive
// pivots, entries above each pivot reduced into [0, pivot).
IntMat hnf(IntMat rows);

struct HnfTransform {
    IntMat h;  // all rows, zero rows last
    IntMat u;  // unimodular, u * input = h
    std::size_t rank = 0;
};
HnfTransform hnf_with_transform(const IntMat& rows);

std::size_t matrix_rank(const IntMat& rows);
// Nonzero invariant factors, ascending by divisibility.
std::vector<Int> smith_invariants(IntMat m);
// Integer basis of {x : A x = 0}.
IntMat integer_kernel(const IntMat& a, std::size_t cols);

IntMat transpose(const IntMat& m, std::size_t cols);
IntMat mat_mul(const IntMat& a, const IntMat& b);
IntMat identity_matrix(std::size_t n);

class Lattice {
public:
    explicit Lattice(std::size_t dim = 0) : dim_(dim) {}
    static Lattice span(std::size_t dim, const IntMat& gens);
    static Lattice scaled_identity(std::size_t dim, const Int& m);

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return basis_.size(); }
    const IntMat& basis() const { return basis_; }
    std::vector<std::size_t> pivots() const;

    bool contains(const IntVec& v) const;
    bool contains(const Lattice& other) const;
    // Canonical representative of v modulo the lattice.
    IntVec residue(const IntVec& v) const;
    Lattice saturation() const;
    bool is_saturated() const;

    Lattice operator+(const Lattice& other) const;
    bool operator==(const Lattice& other) const { return dim_ == other.dim_ && basis_ == other.basis_; }

private:
    std::size_t dim_ = 0;
    IntMat basis_;
};

IntVec vec_add(const IntVec& a, const IntVec& b);
IntVec vec_scale(const IntVec& a, const Int& k);
bool is_zero(const IntVec& v);
std::string to_string(const IntVec& v);

}  // namespace w3
