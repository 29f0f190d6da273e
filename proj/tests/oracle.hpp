// Independent brute-force oracles for the test suites. Nothing here shares
// code with the library's elimination engine: ranks come from fraction-free
// (Bareiss) elimination, torsion from gcd-of-minors, so these paths can audit
// the SNF engine and the cohomology pipeline.

#pragma once

#include "roelab/snf.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

using roelab::AbelianGroup;
using roelab::BigInt;

using Dense = std::vector<std::vector<BigInt>>;

inline Dense from_sparse(const roelab::SparseMat<BigInt>& M) {
    Dense D(M.nrows, std::vector<BigInt>(M.ncols, BigInt(0)));
    for (int c = 0; c < M.ncols; ++c)
        for (auto& [r, v] : M.cols[c].e) D[r][c] = v;
    return D;
}

// fraction-free Gaussian elimination rank
inline int bareiss_rank(Dense M) {
    int m = (int)M.size();
    int n = m ? (int)M[0].size() : 0;
    int rank = 0;
    BigInt prev(1);
    for (int col = 0; col < n && rank < m; ++col) {
        int piv = -1;
        for (int i = rank; i < m; ++i)
            if (!M[i][col].is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[rank], M[piv]);
        for (int i = rank + 1; i < m; ++i)
            for (int j = col + 1; j < n; ++j)
                M[i][j] = (M[rank][col] * M[i][j] - M[i][col] * M[rank][j]) / prev;
        for (int i = rank + 1; i < m; ++i) M[i][col] = 0;
        prev = M[rank][col];
        ++rank;
    }
    return rank;
}

inline BigInt gcd_big(BigInt a, BigInt b) {
    a = abs(a);
    b = abs(b);
    while (!b.is_zero()) {
        BigInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// determinant by cofactor expansion (tiny matrices only)
inline BigInt det_rec(const Dense& M, std::vector<int> rows, std::vector<int> cols) {
    if (rows.empty()) return 1;
    BigInt acc(0);
    int sign = 1;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        BigInt v = M[rows[0]][cols[k]];
        if (!v.is_zero()) {
            std::vector<int> r2(rows.begin() + 1, rows.end());
            std::vector<int> c2;
            for (std::size_t l = 0; l < cols.size(); ++l)
                if (l != k) c2.push_back(cols[l]);
            acc += sign * v * det_rec(M, r2, c2);
        }
        sign = -sign;
    }
    return acc;
}

// invariant factors via gcds of k x k minors (exponential; dims <= ~6)
inline std::vector<BigInt> minor_gcd_invariant_factors(const Dense& M) {
    int m = (int)M.size();
    int n = m ? (int)M[0].size() : 0;
    int r = bareiss_rank(M);
    std::vector<BigInt> g(r + 1, BigInt(0));
    g[0] = 1;
    for (int k = 1; k <= r; ++k) {
        // gcd over all k x k minors
        std::vector<int> rows(k), cols(k);
        BigInt acc(0);
        std::vector<int> rsel(k);
        std::iota(rsel.begin(), rsel.end(), 0);
        auto next_comb = [](std::vector<int>& c, int limit) {
            int k2 = (int)c.size();
            for (int i = k2 - 1; i >= 0; --i) {
                if (c[i] < limit - (k2 - i)) {
                    ++c[i];
                    for (int j = i + 1; j < k2; ++j) c[j] = c[j - 1] + 1;
                    return true;
                }
            }
            return false;
        };
        do {
            std::vector<int> csel(k);
            std::iota(csel.begin(), csel.end(), 0);
            do {
                acc = gcd_big(acc, det_rec(M, rsel, csel));
            } while (next_comb(csel, n));
        } while (next_comb(rsel, m));
        g[k] = acc;
    }
    std::vector<BigInt> d;
    for (int k = 1; k <= r; ++k) d.push_back(g[k] / g[k - 1]);
    return d;
}

// ker(d_out)/im(d_in) for small matrices. The integer kernel of a matrix is a
// saturated sublattice, so the torsion of the quotient is exactly the set of
// nontrivial invariant factors of d_in.
inline AbelianGroup brute_cohomology(const roelab::SparseMat<BigInt>& d_in,
                                     const roelab::SparseMat<BigInt>& d_out) {
    int mid = d_out.ncols ? d_out.ncols : d_in.nrows;
    int rk_out = bareiss_rank(from_sparse(d_out));
    int rk_in = bareiss_rank(from_sparse(d_in));
    AbelianGroup g;
    g.rank = (mid - rk_out) - rk_in;
    for (auto& d : minor_gcd_invariant_factors(from_sparse(d_in)))
        if (abs(d) > 1) g.torsion.push_back(abs(d));
    std::sort(g.torsion.begin(), g.torsion.end());
    return g;
}

// deterministic xorshift for reproducible random fixtures
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    int uniform(int lo, int hi) { return lo + (int)(next() % (std::uint64_t)(hi - lo + 1)); }
};

} // namespace oracle
