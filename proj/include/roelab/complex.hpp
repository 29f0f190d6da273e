// U-controlled simplices and the integer cochain complexes they span.
//
// Two backends realize the same cohomology (verified by a cross-check suite):
//   ordered_normalized — tuples with no repeated consecutive entry; cochains
//                        vanish on degenerate tuples,
//   alternating        — strictly increasing vertex tuples in the global
//                        lexicographic point order.
//
// Enumeration is the cost driver, so the parallel kernel is OpenMP over the
// leading vertex; a plain serial reference is kept alongside and the two are
// compared in the tests and the benchmark.

#pragma once

#include "roelab/snf.hpp"
#include "roelab/space.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace roelab {

enum class Backend { ordered_normalized, alternating };

struct BudgetExceeded : Error {
    using Error::Error;
};
struct WindowTooSmall : Error {
    using Error::Error;
};

struct EnumerationOptions {
    int degree_cap = 3;
    long long budget = 20'000'000; // simplex-count guard, never silent truncation
    bool parallel = true;
};

struct CochainBasis {
    const Window* w = nullptr;
    int degree = 0;
    int scale = 0;
    Backend backend = Backend::alternating;
    std::vector<int> region;                  // sorted point indices
    std::vector<std::vector<int>> simplices;  // lexicographic order

    int size() const { return (int)simplices.size(); }
    int find(const std::vector<int>& tuple) const;

    void build_index();

private:
    std::unordered_map<std::uint64_t, int> index_;
};

std::uint64_t pack_tuple(const std::vector<int>& t);

// Complete duplicate-free enumeration of the U_k-controlled degree-n
// simplices contained in `region`, deterministic lexicographic order.
CochainBasis enumerate_controlled_simplices(const Window& w, int k, int degree,
                                            std::vector<int> region, Backend backend,
                                            const EnumerationOptions& opt = {});

// Reference implementation: plain recursion over the region, no OpenMP, no
// neighbor-list pruning. Kept for the parallel-consistency tests.
CochainBasis enumerate_controlled_simplices_serial(const Window& w, int k, int degree,
                                                   std::vector<int> region, Backend backend,
                                                   const EnumerationOptions& opt = {});

// Basis of the kernel of restriction-to-Y: controlled simplices in `region`
// not contained in Y.
CochainBasis relative_basis(const Window& w, int k, int degree, std::vector<int> region,
                            const std::vector<int>& Y, Backend backend,
                            const EnumerationOptions& opt = {});

// U_k[region] intersected with the window
std::vector<int> thicken_region(const Window& w, const std::vector<int>& region, int k);

// Matrix of d(phi)(tau) = sum_i (-1)^i phi(d_i tau), rows = b_next simplices,
// columns = b_n simplices. pre: b_next.region contains U_k[b_n.region].
SparseMat<BigInt> coboundary_matrix(const CochainBasis& b_n, const CochainBasis& b_next);

// Same matrix without the padding precondition: evaluates d exactly on the
// rows given by b_next, which need not exhaust U_k[b_n.region]. For identity
// checks that compare both sides on a fixed row set.
SparseMat<BigInt> coboundary_matrix_rows(const CochainBasis& b_n, const CochainBasis& b_next);

// Evaluate a cochain on a tuple of ambient coordinates; vertices outside the
// window make the value 0 (cochains are supported inside their basis region).
BigInt evaluate_cochain_coords(const CochainBasis& basis, const SparseVec<BigInt>& phi,
                               const std::vector<Coord>& verts);

// Matrix of the pullback along m: rows = dom basis, columns = cod basis.
// Throws when images of dom simplices are not controlled at the codomain
// scale (the map/scale pair is insufficient).
SparseMat<BigInt> pullback_matrix(const SpaceMap& m, const CochainBasis& dom_basis,
                                  const CochainBasis& cod_basis);

// Scale restriction C_{k'} -> C_k (forget simplices not U_k-controlled) on a
// fixed region: rows = coarse-scale basis b_k, columns = fine-scale b_kk.
SparseMat<BigInt> scale_restriction_matrix(const CochainBasis& b_k, const CochainBasis& b_kk);

// Evaluate a cochain (coefficients on `basis`) on an arbitrary vertex tuple,
// applying the backend's orientation/degeneracy conventions.
BigInt evaluate_cochain(const CochainBasis& basis, const SparseVec<BigInt>& phi,
                        std::vector<int> tuple);

// Inclusion of bases with the same conventions on nested regions: column j
// (a simplex of `from`) maps to its index in `to`. Throws if absent.
SparseMat<BigInt> basis_inclusion_matrix(const CochainBasis& from, const CochainBasis& to);

} // namespace roelab
