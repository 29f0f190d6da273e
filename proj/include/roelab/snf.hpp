// Exact integer linear algebra: Smith normal form, cohomology of integer
// complexes, and image-membership solves. All reported groups come from
// exact computations over Z; arbitrary precision throughout (int64 fast path
// with automatic escalation).

#pragma once

#include "roelab/sparse.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace roelab {

// Finitely generated abelian group in canonical form.
struct AbelianGroup {
    int rank = 0;
    std::vector<BigInt> torsion; // invariant factors d1 | d2 | ..., each >= 2

    bool operator==(const AbelianGroup& o) const { return rank == o.rank && torsion == o.torsion; }
    bool is_trivial() const { return rank == 0 && torsion.empty(); }
    std::string str() const;

    static AbelianGroup free(int r) { return AbelianGroup{r, {}}; }
    static AbelianGroup trivial() { return AbelianGroup{0, {}}; }
    static AbelianGroup cyclic(long long n) {
        AbelianGroup g;
        if (n == 0) g.rank = 1;
        else if (n != 1 && n != -1) g.torsion.push_back(BigInt(n < 0 ? -n : n));
        return g;
    }
};

// Direct sum in canonical form.
AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b);

using DenseMat = std::vector<std::vector<BigInt>>;

DenseMat dense_identity(int n);
DenseMat dense_mul(const DenseMat& A, const DenseMat& B);
DenseMat to_dense(const SparseMat<BigInt>& M);
SparseMat<BigInt> to_sparse(const DenseMat& M, int nrows, int ncols);
BigInt dense_det(DenseMat M); // fraction-free (Bareiss)

struct SNFResult {
    DenseMat U, V, D; // U * M * V = D, diagonal with divisibility chain
    AbelianGroup cokernel() const;
    std::vector<BigInt> diagonal() const;
};

// Deterministic SNF: minimal-absolute-value pivot, row/column fill count
// tie-break. Reconstruction U*M*V = D and det U, det V in {+1,-1} are
// re-verified before returning.
SNFResult smith_normal_form(const SparseMat<BigInt>& M);

// ---------------------------------------------------------------------------
// Quotient presentations Z^n / <relation columns> with explicit generators
// and a coordinate map for arbitrary vectors.
// ---------------------------------------------------------------------------

class QuotientPresentation {
public:
    // relations: columns in Z^n
    QuotientPresentation(int n, const SparseMat<BigInt>& relations);

    const AbelianGroup& group() const { return group_; }

    // One representative vector in Z^n per canonical generator
    // (torsion generators first, matching group().torsion order, then free).
    const std::vector<SparseVec<BigInt>>& generators() const { return gens_; }

    // Coordinates of [z] w.r.t. the canonical generators; torsion coordinates
    // are reduced into [0, d_i).
    std::vector<BigInt> coordinates(const SparseVec<BigInt>& z) const;

    bool is_zero_class(const SparseVec<BigInt>& z) const;

private:
    int n_;
    AbelianGroup group_;
    std::vector<SparseVec<BigInt>> gens_;

    // unit-pivot substitution replay: (row, frozen column snapshot)
    struct Subst {
        int row;
        BigInt unit;
        SparseVec<BigInt> col;
    };
    std::vector<Subst> subst_;
    std::vector<int> survivors_;        // coordinate ids, ascending
    std::vector<int> survivor_pos_;     // coordinate id -> position (or -1)
    DenseMat usmall_;                    // adapted-coordinate transform on survivors
    std::vector<BigInt> diag_;           // relation diagonal per adapted coordinate (0 = none)
    std::vector<int> gen_adapted_index_; // generator -> adapted coordinate index
};

// ---------------------------------------------------------------------------
// Cohomology at one spot of an integer complex: ker(d_out) / im(d_in).
// ---------------------------------------------------------------------------

class Cohomology {
public:
    // pre: d_out * d_in = 0 (checked; throws Error otherwise)
    Cohomology(const SparseMat<BigInt>& d_in, const SparseMat<BigInt>& d_out);

    const AbelianGroup& group() const { return group_; }

    // Representative cocycles, one per canonical generator.
    const std::vector<SparseVec<BigInt>>& representatives() const { return reps_; }

    // Coordinates of a cocycle's class (throws if z is not in ker d_out).
    std::vector<BigInt> class_coordinates(const SparseVec<BigInt>& z) const;
    bool is_zero_class(const SparseVec<BigInt>& z) const;

    int cocycle_lattice_rank() const { return kernel_dim_; }

private:
    AbelianGroup group_;
    std::vector<SparseVec<BigInt>> reps_;
    int kernel_dim_ = 0;

    SparseMat<BigInt> K_;                       // kernel basis columns
    std::shared_ptr<ColReduction<BigInt>> Ke_;  // echelonized copy of K (tracked)
    std::shared_ptr<QuotientPresentation> quot_;

    std::vector<BigInt> kernel_coordinates(const SparseVec<BigInt>& z) const;
};

// Integer solve M*x = b with x supported inside `mask` (all columns when
// empty). Returns a solution or nullopt with certified unsolvability.
std::optional<SparseVec<BigInt>> image_membership(const SparseMat<BigInt>& M,
                                                  const SparseVec<BigInt>& b,
                                                  const std::vector<int>& mask = {});

// Map of finitely generated abelian groups given on canonical generators:
// column j of `m` = coordinates of the image of source generator j in the
// target's generators. Homomorphism well-definedness on torsion is the
// caller's responsibility (towers verify it on representatives).
struct GroupHom {
    AbelianGroup src, dst;
    DenseMat m; // dst-gens x src-gens
};

bool hom_is_surjective(const GroupHom& h);
bool hom_is_isomorphism(const GroupHom& h); // surjective + forms equal (Hopfian)

// ---------------------------------------------------------------------------
// Groups on an ordered generator list (products of tower entries keep their
// generator order; canonical forms would reshuffle it).
// ---------------------------------------------------------------------------

struct GenGroup {
    std::vector<BigInt> orders; // per generator: 0 = free, else the order
    int count() const { return (int)orders.size(); }
    static GenGroup of(const AbelianGroup& g); // torsion gens (chain order), then free
    static GenGroup product(const GenGroup& a, const GenGroup& b);
};

struct GenHom {
    GenGroup src, dst;
    DenseMat m; // dst.count() x src.count()
};

bool gen_hom_surjective(const GenHom& h);

// Generators (in Z^{src.count()} coordinates) of the kernel subgroup.
std::vector<SparseVec<BigInt>> gen_hom_kernel(const GenHom& h);

// Equality of the subgroups generated by gens1/gens2 inside the group (the
// group's relations are included on both sides).
bool gen_subgroup_equal(const GenGroup& g, const std::vector<SparseVec<BigInt>>& gens1,
                        const std::vector<SparseVec<BigInt>>& gens2);

bool gen_subgroup_full(const GenGroup& g, const std::vector<SparseVec<BigInt>>& gens);

} // namespace roelab
