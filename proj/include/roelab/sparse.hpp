// Sparse exact integer matrices and the unimodular column-reduction engine.
//
// One reduction primitive backs everything in the workbench: integer kernels
// (with basis), echelon bases of column lattices, lattice membership solves,
// and ranks. Reduction uses column operations only, so the column lattice and
// the kernel are preserved; an optional transform V records the operations
// (M_original * V = M_reduced, V unimodular).
//
// Pivot rows are processed lightest-first (fewest active entries), which on
// coboundary-type matrices keeps fill-in low. Within a pivot row the entry of
// minimal absolute value clears the others by Euclidean column steps.

#pragma once

#include "roelab/ints.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <set>
#include <vector>

namespace roelab {

template <class T>
struct SparseVec {
    // sorted by index, no explicit zeros
    std::vector<std::pair<int, T>> e;

    bool empty() const { return e.empty(); }
    void clear() { e.clear(); }

    T at(int i) const {
        auto it = std::lower_bound(e.begin(), e.end(), i,
                                   [](const auto& p, int k) { return p.first < k; });
        if (it != e.end() && it->first == i) return it->second;
        return T(0);
    }
    void set(int i, const T& v) {
        auto it = std::lower_bound(e.begin(), e.end(), i,
                                   [](const auto& p, int k) { return p.first < k; });
        if (it != e.end() && it->first == i) {
            if (is_zero(v)) e.erase(it);
            else it->second = v;
        } else if (!is_zero(v)) {
            e.insert(it, {i, v});
        }
    }
};

// dst += c * src
template <class T>
void axpy(SparseVec<T>& dst, const T& c, const SparseVec<T>& src) {
    if (is_zero(c) || src.e.empty()) return;
    std::vector<std::pair<int, T>> out;
    out.reserve(dst.e.size() + src.e.size());
    auto a = dst.e.begin();
    auto b = src.e.begin();
    while (a != dst.e.end() && b != src.e.end()) {
        if (a->first < b->first) {
            out.push_back(*a++);
        } else if (a->first > b->first) {
            T v = c * b->second;
            if (!is_zero(v)) out.push_back({b->first, v});
            ++b;
        } else {
            T v = a->second + c * b->second;
            if (!is_zero(v)) out.push_back({a->first, v});
            ++a;
            ++b;
        }
    }
    for (; a != dst.e.end(); ++a) out.push_back(*a);
    for (; b != src.e.end(); ++b) {
        T v = c * b->second;
        if (!is_zero(v)) out.push_back({b->first, v});
    }
    dst.e = std::move(out);
}

template <class T>
struct SparseMat {
    int nrows = 0, ncols = 0;
    std::vector<SparseVec<T>> cols;

    SparseMat() = default;
    SparseMat(int r, int c) : nrows(r), ncols(c), cols(c) {}

    void add(int r, int c, const T& v) {
        assert(r >= 0 && r < nrows && c >= 0 && c < ncols);
        auto& col = cols[c];
        T cur = col.at(r);
        col.set(r, cur + v);
    }
    T at(int r, int c) const { return cols[c].at(r); }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (auto& c : cols) n += c.e.size();
        return n;
    }

    template <class U>
    SparseMat<U> cast() const {
        SparseMat<U> out(nrows, ncols);
        for (int c = 0; c < ncols; ++c)
            for (auto& [r, v] : cols[c].e) out.cols[c].e.push_back({r, from_big<U>(to_big(v))});
        return out;
    }
};

template <class T>
SparseVec<T> mat_vec(const SparseMat<T>& M, const SparseVec<T>& x) {
    SparseVec<T> out;
    for (auto& [c, v] : x.e) axpy(out, v, M.cols[c]);
    return out;
}

template <class T>
SparseMat<T> mat_mul(const SparseMat<T>& A, const SparseMat<T>& B) {
    assert(A.ncols == B.nrows);
    SparseMat<T> out(A.nrows, B.ncols);
    for (int c = 0; c < B.ncols; ++c) out.cols[c] = mat_vec(A, B.cols[c]);
    return out;
}

template <class T>
bool is_zero_mat(const SparseMat<T>& M) {
    for (auto& c : M.cols)
        if (!c.empty()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Column reduction
// ---------------------------------------------------------------------------

template <class T>
struct ColReduction {
    SparseMat<T> R;                         // reduced matrix
    SparseMat<T> V;                         // transform, if tracked: M * V = R
    std::vector<std::pair<int, int>> pivots; // (row, col) in processing order
    std::vector<int> kernel_cols;            // columns of R that ended zero
    bool tracked = false;

    int rank() const { return (int)pivots.size(); }
};

template <class T>
class ColReducer {
public:
    ColReducer(SparseMat<T> M, bool track) : m_(std::move(M)), track_(track) {
        if (track_) {
            v_ = SparseMat<T>(m_.ncols, m_.ncols);
            for (int c = 0; c < m_.ncols; ++c) v_.cols[c].e.push_back({c, T(1)});
        }
        frozen_.assign(m_.ncols, 0);
        row_cols_.assign(m_.nrows, {});
        row_nnz_.assign(m_.nrows, 0);
        for (int c = 0; c < m_.ncols; ++c)
            for (auto& [r, v] : m_.cols[c].e) {
                row_cols_[r].push_back(c);
                ++row_nnz_[r];
            }
        for (int r = 0; r < m_.nrows; ++r)
            if (row_nnz_[r] > 0) queue_.insert({row_nnz_[r], r});
    }

    ColReduction<T> run() {
        while (!queue_.empty()) {
            int r = queue_.begin()->second;
            process_row(r);
        }
        ColReduction<T> out;
        out.tracked = track_;
        out.pivots = std::move(pivots_);
        for (int c = 0; c < m_.ncols; ++c)
            if (!frozen_[c]) {
                assert(m_.cols[c].empty());
                out.kernel_cols.push_back(c);
            }
        out.R = std::move(m_);
        if (track_) out.V = std::move(v_);
        return out;
    }

private:
    SparseMat<T> m_, v_;
    bool track_;
    std::vector<char> frozen_;
    std::vector<std::vector<int>> row_cols_; // may contain stale column ids
    std::vector<int> row_nnz_;               // exact count over active columns
    std::set<std::pair<int, int>> queue_;    // (nnz, row), rows with nnz > 0
    std::vector<std::pair<int, int>> pivots_;

    // collect active columns with a genuine nonzero at row r
    std::vector<int> live_cols(int r) {
        std::vector<int>& cand = row_cols_[r];
        std::vector<int> live;
        live.reserve(cand.size());
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        std::vector<int> keep;
        for (int c : cand) {
            if (frozen_[c]) continue;
            if (is_zero(m_.cols[c].at(r))) continue;
            live.push_back(c);
            keep.push_back(c);
        }
        row_cols_[r] = std::move(keep);
        return live;
    }

    void queue_update(int r, int delta) {
        auto it = queue_.find({row_nnz_[r], r});
        if (it != queue_.end()) queue_.erase(it);
        row_nnz_[r] += delta;
        assert(row_nnz_[r] >= 0);
        if (row_nnz_[r] > 0) queue_.insert({row_nnz_[r], r});
    }

    // col[dst] += q * col[src], maintaining the row index structures
    void col_axpy(int dst, const T& q, int src) {
        std::vector<int> before;
        before.reserve(m_.cols[dst].e.size());
        for (auto& [r, v] : m_.cols[dst].e) before.push_back(r);
        axpy(m_.cols[dst], q, m_.cols[src]);
        if (track_) axpy(v_.cols[dst], q, v_.cols[src]);
        // diff the row sets
        std::size_t bi = 0;
        for (auto& [r, v] : m_.cols[dst].e) {
            while (bi < before.size() && before[bi] < r) {
                queue_update(before[bi], -1); // row disappeared from dst
                ++bi;
            }
            if (bi < before.size() && before[bi] == r) {
                ++bi;
            } else {
                row_cols_[r].push_back(dst); // row appeared in dst
                queue_update(r, +1);
            }
        }
        while (bi < before.size()) {
            queue_update(before[bi], -1);
            ++bi;
        }
    }

    void process_row(int r) {
        for (;;) {
            std::vector<int> live = live_cols(r);
            if (live.empty()) {
                // stale queue entry
                if (row_nnz_[r] != 0) {
                    queue_.erase({row_nnz_[r], r});
                    row_nnz_[r] = 0;
                }
                return;
            }
            if ((int)live.size() == 1) {
                freeze(r, live[0]);
                return;
            }
            // pick minimal |value|, tie-break lighter column, then index
            int best = live[0];
            for (int c : live) {
                T a = abs(m_.cols[c].at(r));
                T b = abs(m_.cols[best].at(r));
                if (a < b ||
                    (a == b && (m_.cols[c].e.size() < m_.cols[best].e.size() ||
                                (m_.cols[c].e.size() == m_.cols[best].e.size() && c < best))))
                    best = c;
            }
            T pv = m_.cols[best].at(r);
            for (int c : live) {
                if (c == best) continue;
                T q = T(0) - (m_.cols[c].at(r) / pv);
                if (!is_zero(q)) col_axpy(c, q, best);
            }
            // all other entries are now remainders with |rem| < |pv|;
            // loop until a single nonzero remains in this row
        }
    }

    void freeze(int r, int c) {
        frozen_[c] = 1;
        for (auto& [rr, v] : m_.cols[c].e) queue_update(rr, -1);
        pivots_.push_back({r, c});
    }
};

template <class T>
ColReduction<T> reduce_columns(SparseMat<T> M, bool track) {
    ColReducer<T> red(std::move(M), track);
    return red.run();
}

// Solve  R_frozen * y = b  by forward substitution through the pivot order.
// Returns coefficients indexed by pivot column, or nullopt if b is not in the
// lattice spanned by the frozen (echelon) columns.
template <class T>
std::optional<SparseVec<T>> echelon_solve(const ColReduction<T>& red, SparseVec<T> b) {
    SparseVec<T> y;
    for (auto& [r, c] : red.pivots) {
        T v = b.at(r);
        if (is_zero(v)) continue;
        T p = red.R.cols[c].at(r);
        if (!is_zero(v % p)) return std::nullopt;
        T q = v / p;
        axpy(b, T(0) - q, red.R.cols[c]);
        y.set(c, q);
    }
    if (!b.empty()) return std::nullopt;
    return y;
}

// Kernel basis as explicit columns (basis of the saturated integer kernel).
template <class T>
SparseMat<T> kernel_basis(const ColReduction<T>& red) {
    assert(red.tracked);
    SparseMat<T> K(red.V.nrows, (int)red.kernel_cols.size());
    for (int i = 0; i < (int)red.kernel_cols.size(); ++i) K.cols[i] = red.V.cols[red.kernel_cols[i]];
    return K;
}

// ---------------------------------------------------------------------------
// Rank over the prime field F_p (p = 2^31 - 1 by default): a fast filter
// only, never the source of a reported group.
// ---------------------------------------------------------------------------

int rank_mod_p(const SparseMat<BigInt>& M, std::int64_t p = (1LL << 31) - 1);

} // namespace roelab
