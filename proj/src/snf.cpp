#include "roelab/snf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <omp.h>
#include <sstream>

namespace roelab {

// ---------------------------------------------------------------------------
// AbelianGroup
// ---------------------------------------------------------------------------

std::string AbelianGroup::str() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (rank == 1) {
        os << "Z";
        first = false;
    } else if (rank > 1) {
        os << "Z^" << rank;
        first = false;
    }
    for (auto& d : torsion) {
        if (!first) os << " + ";
        os << "Z/" << d.str();
        first = false;
    }
    return os.str();
}

static BigInt big_gcd(BigInt a, BigInt b) {
    a = abs(a);
    b = abs(b);
    while (!b.is_zero()) {
        BigInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b) {
    AbelianGroup out;
    out.rank = a.rank + b.rank;
    std::vector<BigInt> t = a.torsion;
    t.insert(t.end(), b.torsion.begin(), b.torsion.end());
    // renormalize to a divisibility chain by pairwise gcd/lcm passes
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = i + 1; j < t.size(); ++j) {
                if ((t[j] % t[i]).is_zero()) continue;
                BigInt g = big_gcd(t[i], t[j]);
                BigInt l = t[i] / g * t[j];
                t[i] = g;
                t[j] = l;
                changed = true;
            }
    }
    std::sort(t.begin(), t.end());
    out.torsion.clear();
    for (auto& d : t)
        if (d > 1) out.torsion.push_back(d);
    return out;
}

// ---------------------------------------------------------------------------
// Dense helpers
// ---------------------------------------------------------------------------

DenseMat dense_identity(int n) {
    DenseMat I(n, std::vector<BigInt>(n, BigInt(0)));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

DenseMat dense_mul(const DenseMat& A, const DenseMat& B) {
    int m = (int)A.size();
    int k = m ? (int)A[0].size() : 0;
    int n = k && B.size() ? (int)B[0].size() : (B.empty() ? 0 : (int)B[0].size());
    DenseMat C(m, std::vector<BigInt>(n, BigInt(0)));
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < k; ++l) {
            if (A[i][l].is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                if (B[l][j].is_zero()) continue;
                C[i][j] += A[i][l] * B[l][j];
            }
        }
    return C;
}

DenseMat to_dense(const SparseMat<BigInt>& M) {
    DenseMat D(M.nrows, std::vector<BigInt>(M.ncols, BigInt(0)));
    for (int c = 0; c < M.ncols; ++c)
        for (auto& [r, v] : M.cols[c].e) D[r][c] = v;
    return D;
}

SparseMat<BigInt> to_sparse(const DenseMat& M, int nrows, int ncols) {
    SparseMat<BigInt> S(nrows, ncols);
    for (int c = 0; c < ncols; ++c)
        for (int r = 0; r < nrows; ++r)
            if (!M[r][c].is_zero()) S.cols[c].e.push_back({r, M[r][c]});
    return S;
}

BigInt dense_det(DenseMat M) {
    int n = (int)M.size();
    if (n == 0) return 1;
    BigInt prev(1);
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (M[k][k].is_zero()) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (!M[i][k].is_zero()) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            std::swap(M[k], M[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]) / prev;
        prev = M[k][k];
    }
    return sign > 0 ? M[n - 1][n - 1] : -M[n - 1][n - 1];
}

// ---------------------------------------------------------------------------
// Dense Smith normal form with transform tracking
// ---------------------------------------------------------------------------

namespace {

struct DenseSnf {
    DenseMat D, U, V, Uinv, Vinv;
    int m, n;

    explicit DenseSnf(DenseMat M)
        : D(std::move(M)), m((int)D.size()), n(m ? (int)D[0].size() : 0) {
        U = dense_identity(m);
        Uinv = dense_identity(m);
        V = dense_identity(n);
        Vinv = dense_identity(n);
    }

    void row_axpy(int dst, const BigInt& q, int src) {
        for (int j = 0; j < n; ++j) D[dst][j] += q * D[src][j];
        for (int j = 0; j < m; ++j) U[dst][j] += q * U[src][j];
        for (int i = 0; i < m; ++i) Uinv[i][src] -= q * Uinv[i][dst];
    }
    void col_axpy(int dst, const BigInt& q, int src) {
        for (int i = 0; i < m; ++i) D[i][dst] += q * D[i][src];
        for (int i = 0; i < n; ++i) V[i][dst] += q * V[i][src];
        for (int j = 0; j < n; ++j) Vinv[src][j] -= q * Vinv[dst][j];
    }
    void row_swap(int a, int b) {
        if (a == b) return;
        std::swap(D[a], D[b]);
        std::swap(U[a], U[b]);
        for (int i = 0; i < m; ++i) std::swap(Uinv[i][a], Uinv[i][b]);
    }
    void col_swap(int a, int b) {
        if (a == b) return;
        for (int i = 0; i < m; ++i) std::swap(D[i][a], D[i][b]);
        for (int i = 0; i < n; ++i) std::swap(V[i][a], V[i][b]);
        std::swap(Vinv[a], Vinv[b]);
    }
    void row_negate(int a) {
        for (int j = 0; j < n; ++j) D[a][j] = -D[a][j];
        for (int j = 0; j < m; ++j) U[a][j] = -U[a][j];
        for (int i = 0; i < m; ++i) Uinv[i][a] = -Uinv[i][a];
    }

    int row_nnz(int i, int from) const {
        int c = 0;
        for (int j = from; j < n; ++j)
            if (!D[i][j].is_zero()) ++c;
        return c;
    }
    int col_nnz(int j, int from) const {
        int c = 0;
        for (int i = from; i < m; ++i)
            if (!D[i][j].is_zero()) ++c;
        return c;
    }

    // minimal |value|; tie-break by fewer entries in row+column, then (i,j)
    bool find_pivot(int s, int& pi, int& pj) const {
        bool found = false;
        BigInt best;
        long bestcnt = 0;
        for (int i = s; i < m; ++i)
            for (int j = s; j < n; ++j) {
                if (D[i][j].is_zero()) continue;
                BigInt a = abs(D[i][j]);
                long cnt = row_nnz(i, s) + col_nnz(j, s);
                if (!found || a < best || (a == best && cnt < bestcnt)) {
                    found = true;
                    best = a;
                    bestcnt = cnt;
                    pi = i;
                    pj = j;
                }
            }
        return found;
    }

    void run() {
        int steps = std::min(m, n);
        for (int s = 0; s < steps; ++s) {
            int pi, pj;
            if (!find_pivot(s, pi, pj)) break;
            row_swap(s, pi);
            col_swap(s, pj);
            for (;;) {
                bool clean = true;
                for (int i = s + 1; i < m; ++i) {
                    if (D[i][s].is_zero()) continue;
                    BigInt q = -(D[i][s] / D[s][s]);
                    row_axpy(i, q, s);
                    if (!D[i][s].is_zero()) clean = false;
                }
                for (int j = s + 1; j < n; ++j) {
                    if (D[s][j].is_zero()) continue;
                    BigInt q = -(D[s][j] / D[s][s]);
                    col_axpy(j, q, s);
                    if (!D[s][j].is_zero()) clean = false;
                }
                if (!clean) {
                    // remainders survived; move the smallest one into place
                    int ni, nj;
                    if (!find_pivot(s, ni, nj)) break;
                    row_swap(s, ni);
                    col_swap(s, nj);
                    continue;
                }
                break;
            }
            if (D[s][s] < 0) row_negate(s);
        }
        // enforce the divisibility chain on the diagonal
        for (;;) {
            bool ok = true;
            for (int i = 0; i + 1 < steps && !D[i][i].is_zero(); ++i) {
                int j = i + 1;
                if (j >= steps || D[j][j].is_zero()) break;
                if ((D[j][j] % D[i][i]).is_zero()) continue;
                ok = false;
                // rediagonalize the 2x2 block {i,j} x {i,j} to (gcd, lcm)
                col_axpy(i, BigInt(1), j); // now D[j][i] = D[j][j]
                for (;;) {
                    // move the minimal-|value| nonzero of the block to (i,i)
                    BigInt best = abs(D[i][i]);
                    int bi = i, bj = i;
                    auto consider = [&](int r, int c) {
                        if (D[r][c].is_zero()) return;
                        if (best.is_zero() || abs(D[r][c]) < best) {
                            best = abs(D[r][c]);
                            bi = r;
                            bj = c;
                        }
                    };
                    consider(i, j);
                    consider(j, i);
                    consider(j, j);
                    if (bi != i) row_swap(i, j);
                    if (bj != i) col_swap(i, j);
                    bool again = false;
                    if (!D[j][i].is_zero()) {
                        BigInt q = -(D[j][i] / D[i][i]);
                        row_axpy(j, q, i);
                        if (!D[j][i].is_zero()) again = true;
                    }
                    if (!D[i][j].is_zero()) {
                        BigInt q = -(D[i][j] / D[i][i]);
                        col_axpy(j, q, i);
                        if (!D[i][j].is_zero()) again = true;
                    }
                    if (!again && D[j][i].is_zero() && D[i][j].is_zero()) break;
                }
                if (D[i][i] < 0) row_negate(i);
                if (D[j][j] < 0) row_negate(j);
            }
            if (ok) break;
        }
        // zero rows/cols beyond rank already hold; normalize signs
        for (int s = 0; s < steps; ++s)
            if (D[s][s] < 0) row_negate(s);
    }
};

} // namespace

std::vector<BigInt> SNFResult::diagonal() const {
    std::vector<BigInt> d;
    int m = (int)D.size(), n = m ? (int)D[0].size() : 0;
    for (int i = 0; i < std::min(m, n); ++i) d.push_back(D[i][i]);
    return d;
}

AbelianGroup SNFResult::cokernel() const {
    AbelianGroup g;
    int m = (int)D.size(), n = m ? (int)D[0].size() : 0;
    int r = 0;
    for (int i = 0; i < std::min(m, n); ++i)
        if (!D[i][i].is_zero()) ++r;
    g.rank = m - r;
    for (int i = 0; i < std::min(m, n); ++i)
        if (D[i][i] > 1) g.torsion.push_back(D[i][i]);
    return g;
}

SNFResult smith_normal_form(const SparseMat<BigInt>& M) {
    DenseSnf snf(to_dense(M));
    snf.run();
    SNFResult out;
    out.U = std::move(snf.U);
    out.V = std::move(snf.V);
    out.D = std::move(snf.D);
    // re-verify U*M*V = D and unimodularity
    DenseMat umv = dense_mul(dense_mul(out.U, to_dense(M)), out.V);
    if (umv != out.D) throw Error("SNF reconstruction check failed");
    BigInt du = dense_det(out.U), dv = dense_det(out.V);
    if (!(du == 1 || du == -1) || !(dv == 1 || dv == -1))
        throw Error("SNF transform is not unimodular");
    return out;
}

// ---------------------------------------------------------------------------
// QuotientPresentation
// ---------------------------------------------------------------------------

QuotientPresentation::QuotientPresentation(int n, const SparseMat<BigInt>& relations) : n_(n) {
    if (relations.ncols > 0 && relations.nrows != n) throw Error("relation dimension mismatch");

    std::vector<SparseVec<BigInt>> cols = relations.cols;
    std::vector<char> col_frozen(cols.size(), 0);
    std::vector<char> row_dead(n, 0);
    std::vector<std::vector<int>> row_cols(n);
    for (int c = 0; c < (int)cols.size(); ++c)
        for (auto& [r, v] : cols[c].e) row_cols[r].push_back(c);

    // unit-pivot substitution phase
    for (;;) {
        int br = -1, bc = -1;
        long best = -1;
        for (int c = 0; c < (int)cols.size(); ++c) {
            if (col_frozen[c]) continue;
            for (auto& [r, v] : cols[c].e) {
                if (row_dead[r] || !is_unit(v)) continue;
                long cost = (long)(cols[c].e.size() - 1) * (long)(row_cols[r].size() - 1);
                if (best < 0 || cost < best || (cost == best && (r < br || (r == br && c < bc)))) {
                    best = cost;
                    br = r;
                    bc = c;
                }
            }
        }
        if (br < 0) break;
        BigInt unit = cols[bc].at(br);
        // clear row br from every other active column
        std::vector<int> cand = row_cols[br];
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (int c : cand) {
            if (c == bc || col_frozen[c]) continue;
            BigInt v = cols[c].at(br);
            if (v.is_zero()) continue;
            BigInt q = -(v / unit); // exact since unit = +-1
            axpy(cols[c], q, cols[bc]);
            for (auto& [r, w] : cols[bc].e) row_cols[r].push_back(c);
        }
        col_frozen[bc] = 1;
        row_dead[br] = 1;
        subst_.push_back(Subst{br, unit, cols[bc]});
    }

    survivor_pos_.assign(n, -1);
    for (int r = 0; r < n; ++r)
        if (!row_dead[r]) {
            survivor_pos_[r] = (int)survivors_.size();
            survivors_.push_back(r);
        }
    int ns = (int)survivors_.size();

    // residual relations on survivor coordinates
    std::vector<SparseVec<BigInt>> small_cols;
    for (int c = 0; c < (int)cols.size(); ++c) {
        if (col_frozen[c] || cols[c].empty()) continue;
        SparseVec<BigInt> sc;
        for (auto& [r, v] : cols[c].e) {
            if (row_dead[r]) throw Error("internal: relation touches substituted coordinate");
            sc.e.push_back({survivor_pos_[r], v});
        }
        small_cols.push_back(std::move(sc));
    }
    SparseMat<BigInt> Rsmall(ns, (int)small_cols.size());
    Rsmall.cols = std::move(small_cols);

    DenseSnf snf(to_dense(Rsmall));
    snf.run();
    usmall_ = std::move(snf.U);
    DenseMat& uinv = snf.Uinv;

    diag_.assign(ns, BigInt(0));
    int steps = std::min(ns, Rsmall.ncols);
    for (int i = 0; i < steps; ++i) diag_[i] = snf.D[i][i];

    // canonical generator order: torsion ascending (SNF chain order), then free
    std::vector<int> torsion_idx, free_idx;
    for (int i = 0; i < ns; ++i) {
        if (diag_[i].is_zero()) free_idx.push_back(i);
        else if (diag_[i] > 1) torsion_idx.push_back(i);
    }
    group_.rank = (int)free_idx.size();
    for (int i : torsion_idx) group_.torsion.push_back(diag_[i]);

    gen_adapted_index_ = torsion_idx;
    gen_adapted_index_.insert(gen_adapted_index_.end(), free_idx.begin(), free_idx.end());
    for (int ai : gen_adapted_index_) {
        SparseVec<BigInt> g;
        for (int j = 0; j < ns; ++j)
            if (!uinv[j][ai].is_zero()) g.e.push_back({survivors_[j], uinv[j][ai]});
        std::sort(g.e.begin(), g.e.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        gens_.push_back(std::move(g));
    }
}

std::vector<BigInt> QuotientPresentation::coordinates(const SparseVec<BigInt>& z) const {
    SparseVec<BigInt> w = z;
    for (auto& s : subst_) {
        BigInt v = w.at(s.row);
        if (v.is_zero()) continue;
        BigInt q = -(v / s.unit);
        axpy(w, q, s.col);
    }
    int ns = (int)survivors_.size();
    std::vector<BigInt> xs(ns, BigInt(0));
    for (auto& [r, v] : w.e) {
        int p = survivor_pos_[r];
        if (p < 0) throw Error("internal: replay left a substituted coordinate");
        xs[p] = v;
    }
    std::vector<BigInt> adapted(ns, BigInt(0));
    for (int i = 0; i < ns; ++i) {
        if (usmall_.empty()) break;
        for (int j = 0; j < ns; ++j) {
            if (usmall_[i][j].is_zero() || xs[j].is_zero()) continue;
            adapted[i] += usmall_[i][j] * xs[j];
        }
    }
    std::vector<BigInt> out;
    out.reserve(gens_.size());
    for (int ai : gen_adapted_index_) {
        BigInt v = adapted[ai];
        if (!diag_[ai].is_zero()) {
            v %= diag_[ai];
            if (v < 0) v += diag_[ai];
        }
        out.push_back(v);
    }
    return out;
}

bool QuotientPresentation::is_zero_class(const SparseVec<BigInt>& z) const {
    for (auto& v : coordinates(z))
        if (!v.is_zero()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Cohomology
// ---------------------------------------------------------------------------

namespace {

struct CohoData {
    SparseMat<BigInt> K;
    std::shared_ptr<ColReduction<BigInt>> Ke;
    SparseMat<BigInt> X; // d_in columns in kernel coordinates
};

template <class T>
ColReduction<BigInt> reduction_to_big(ColReduction<T>&& red) {
    ColReduction<BigInt> out;
    out.R = red.R.template cast<BigInt>();
    if (red.tracked) out.V = red.V.template cast<BigInt>();
    out.pivots = std::move(red.pivots);
    out.kernel_cols = std::move(red.kernel_cols);
    out.tracked = red.tracked;
    return out;
}

template <class T>
CohoData coho_pipeline(const SparseMat<BigInt>& d_in, const SparseMat<BigInt>& d_out) {
    SparseMat<T> dout = d_out.template cast<T>();
    auto red = reduce_columns(std::move(dout), true);
    SparseMat<T> K = kernel_basis(red);
    auto Ke = reduce_columns(K, true);
    if (Ke.rank() != K.ncols) throw Error("internal: kernel basis is not independent");

    SparseMat<T> din = d_in.template cast<T>();
    SparseMat<T> X(K.ncols, d_in.ncols);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < d_in.ncols; ++c) {
        try {
            auto y = echelon_solve(Ke, din.cols[c]);
            if (!y) throw Error("composability violated: d_in column not in ker(d_out)");
            X.cols[c] = mat_vec(Ke.V, *y);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    CohoData out;
    out.K = K.template cast<BigInt>();
    out.Ke = std::make_shared<ColReduction<BigInt>>(reduction_to_big(std::move(Ke)));
    out.X = X.template cast<BigInt>();
    return out;
}

} // namespace

Cohomology::Cohomology(const SparseMat<BigInt>& d_in, const SparseMat<BigInt>& d_out) {
    if (d_in.ncols > 0 && d_out.ncols > 0 && d_in.nrows != d_out.ncols)
        throw Error("cohomology_at: middle dimensions disagree");
    if (d_in.ncols > 0 && d_out.nrows > 0) {
        if (!is_zero_mat(mat_mul(d_out, d_in))) throw Error("composability violated: d_out * d_in != 0");
    }

    CohoData data;
    try {
        data = coho_pipeline<CheckedI64>(d_in, d_out);
    } catch (const OverflowEscalation&) {
        data = coho_pipeline<BigInt>(d_in, d_out);
    }

    K_ = std::move(data.K);
    Ke_ = std::move(data.Ke);
    kernel_dim_ = K_.ncols;
    quot_ = std::make_shared<QuotientPresentation>(kernel_dim_, data.X);
    group_ = quot_->group();
    for (auto& g : quot_->generators()) {
        SparseVec<BigInt> rep = mat_vec(K_, g);
        // re-verify the representative is a genuine cocycle
        if (!mat_vec(d_out, rep).empty()) throw Error("internal: representative is not a cocycle");
        reps_.push_back(std::move(rep));
    }
}

std::vector<BigInt> Cohomology::kernel_coordinates(const SparseVec<BigInt>& z) const {
    auto y = echelon_solve(*Ke_, z);
    if (!y) throw Error("class_coordinates: vector is not a cocycle");
    SparseVec<BigInt> x = mat_vec(Ke_->V, *y);
    std::vector<BigInt> out(kernel_dim_, BigInt(0));
    for (auto& [i, v] : x.e) out[i] = v;
    return out;
}

std::vector<BigInt> Cohomology::class_coordinates(const SparseVec<BigInt>& z) const {
    auto xs = kernel_coordinates(z);
    SparseVec<BigInt> x;
    for (int i = 0; i < kernel_dim_; ++i)
        if (!xs[i].is_zero()) x.e.push_back({i, xs[i]});
    return quot_->coordinates(x);
}

bool Cohomology::is_zero_class(const SparseVec<BigInt>& z) const {
    for (auto& v : class_coordinates(z))
        if (!v.is_zero()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// image_membership
// ---------------------------------------------------------------------------

std::optional<SparseVec<BigInt>> image_membership(const SparseMat<BigInt>& M,
                                                  const SparseVec<BigInt>& b,
                                                  const std::vector<int>& mask) {
    std::vector<int> cols;
    if (mask.empty()) {
        cols.resize(M.ncols);
        std::iota(cols.begin(), cols.end(), 0);
    } else {
        cols = mask;
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    }
    SparseMat<BigInt> sub(M.nrows, (int)cols.size());
    for (int i = 0; i < (int)cols.size(); ++i) sub.cols[i] = M.cols[cols[i]];

    auto solve = [&](auto tag) -> std::optional<SparseVec<BigInt>> {
        using T = decltype(tag);
        auto red = reduce_columns(sub.template cast<T>(), true);
        SparseVec<T> bb;
        for (auto& [r, v] : b.e) bb.e.push_back({r, from_big<T>(to_big(v))});
        auto y = echelon_solve(red, bb);
        if (!y) return std::nullopt;
        SparseVec<T> x = mat_vec(red.V, *y);
        SparseVec<BigInt> out;
        for (auto& [i, v] : x.e) out.e.push_back({cols[i], to_big(v)});
        return out;
    };

    std::optional<SparseVec<BigInt>> x;
    try {
        x = solve(CheckedI64{});
    } catch (const OverflowEscalation&) {
        x = solve(BigInt{});
    }
    if (!x) return std::nullopt;
    // consistency: M*x = b and the mask is respected (mask holds by construction)
    SparseVec<BigInt> check = mat_vec(M, *x);
    axpy(check, BigInt(-1), b);
    if (!check.empty()) throw Error("internal: image_membership produced an invalid solution");
    return x;
}

// ---------------------------------------------------------------------------
// rank over F_p
// ---------------------------------------------------------------------------

int rank_mod_p(const SparseMat<BigInt>& M, std::int64_t p) {
    auto norm = [&](const BigInt& v) -> std::int64_t {
        BigInt r = v % p;
        if (r < 0) r += p;
        return (std::int64_t)r;
    };
    auto inv_mod = [&](std::int64_t a) {
        std::int64_t r = 1, base = a % p, e = p - 2;
        while (e) {
            if (e & 1) r = (__int128)r * base % p;
            base = (__int128)base * base % p;
            e >>= 1;
        }
        return r;
    };
    std::map<int, std::vector<std::pair<int, std::int64_t>>> pivot_rows; // row -> normalized col
    int rank = 0;
    for (int c = 0; c < M.ncols; ++c) {
        std::vector<std::pair<int, std::int64_t>> v;
        for (auto& [r, val] : M.cols[c].e) {
            std::int64_t w = norm(val);
            if (w) v.push_back({r, w});
        }
        for (;;) {
            if (v.empty()) break;
            int r0 = v.front().first;
            auto it = pivot_rows.find(r0);
            if (it == pivot_rows.end()) break;
            std::int64_t coef = (p - v.front().second) % p;
            // v += coef * pivot
            std::vector<std::pair<int, std::int64_t>> out;
            auto a = v.begin();
            auto b = it->second.begin();
            while (a != v.end() && b != it->second.end()) {
                if (a->first < b->first) out.push_back(*a++);
                else if (a->first > b->first) {
                    std::int64_t w = (__int128)coef * b->second % p;
                    if (w) out.push_back({b->first, w});
                    ++b;
                } else {
                    std::int64_t w = (a->second + (__int128)coef * b->second) % p;
                    if (w) out.push_back({a->first, w});
                    ++a;
                    ++b;
                }
            }
            for (; a != v.end(); ++a) out.push_back(*a);
            for (; b != it->second.end(); ++b) {
                std::int64_t w = (__int128)coef * b->second % p;
                if (w) out.push_back({b->first, w});
            }
            v = std::move(out);
        }
        if (v.empty()) continue;
        std::int64_t s = inv_mod(v.front().second);
        for (auto& [r, w] : v) w = (__int128)w * s % p;
        pivot_rows[v.front().first] = std::move(v);
        ++rank;
    }
    return rank;
}

// ---------------------------------------------------------------------------
// Group homomorphisms on canonical generators
// ---------------------------------------------------------------------------

GenGroup GenGroup::of(const AbelianGroup& g) {
    GenGroup out;
    for (auto& d : g.torsion) out.orders.push_back(d);
    for (int i = 0; i < g.rank; ++i) out.orders.push_back(BigInt(0));
    return out;
}

GenGroup GenGroup::product(const GenGroup& a, const GenGroup& b) {
    GenGroup out = a;
    out.orders.insert(out.orders.end(), b.orders.begin(), b.orders.end());
    return out;
}

namespace {

SparseMat<BigInt> relations_of(const GenGroup& g) {
    int torsion = 0;
    for (auto& o : g.orders)
        if (!o.is_zero()) ++torsion;
    SparseMat<BigInt> rel(g.count(), torsion);
    int c = 0;
    for (int i = 0; i < g.count(); ++i)
        if (!g.orders[i].is_zero()) rel.cols[c++].e.push_back({i, g.orders[i]});
    return rel;
}

SparseMat<BigInt> with_relations(const GenGroup& g, const std::vector<SparseVec<BigInt>>& gens) {
    SparseMat<BigInt> rel = relations_of(g);
    SparseMat<BigInt> out(g.count(), (int)gens.size() + rel.ncols);
    for (int c = 0; c < (int)gens.size(); ++c) out.cols[c] = gens[c];
    for (int c = 0; c < rel.ncols; ++c) out.cols[(int)gens.size() + c] = rel.cols[c];
    return out;
}

} // namespace

bool gen_hom_surjective(const GenHom& h) {
    if (h.dst.count() == 0) return true;
    SparseMat<BigInt> rel(h.dst.count(), h.src.count() + h.dst.count());
    for (int c = 0; c < h.src.count(); ++c)
        for (int r = 0; r < h.dst.count(); ++r)
            if (!h.m[r][c].is_zero()) rel.cols[c].e.push_back({r, h.m[r][c]});
    int c = h.src.count();
    for (int i = 0; i < h.dst.count(); ++i)
        if (!h.dst.orders[i].is_zero()) rel.cols[c + i].e.push_back({i, h.dst.orders[i]});
    QuotientPresentation q(h.dst.count(), rel);
    return q.group().is_trivial();
}

std::vector<SparseVec<BigInt>> gen_hom_kernel(const GenHom& h) {
    // x in ker iff M x lies in the relation lattice of dst: take the integer
    // kernel of [M | R_dst] and project to the x block
    int ns = h.src.count(), nd = h.dst.count();
    SparseMat<BigInt> rel = relations_of(h.dst);
    SparseMat<BigInt> stacked(nd, ns + rel.ncols);
    for (int c = 0; c < ns; ++c)
        for (int r = 0; r < nd; ++r)
            if (!h.m[r][c].is_zero()) stacked.cols[c].e.push_back({r, h.m[r][c]});
    for (int c = 0; c < rel.ncols; ++c) stacked.cols[ns + c] = rel.cols[c];

    auto red = reduce_columns(stacked.cast<BigInt>(), true);
    auto K = kernel_basis(red);
    std::vector<SparseVec<BigInt>> out;
    for (int c = 0; c < K.ncols; ++c) {
        SparseVec<BigInt> v;
        for (auto& [r, val] : K.cols[c].e)
            if (r < ns) v.e.push_back({r, val});
        if (!v.empty()) out.push_back(std::move(v));
    }
    // source relations are kernel elements too (their classes are zero)
    SparseMat<BigInt> srel = relations_of(h.src);
    for (int c = 0; c < srel.ncols; ++c) out.push_back(srel.cols[c]);
    return out;
}

bool gen_subgroup_equal(const GenGroup& g, const std::vector<SparseVec<BigInt>>& gens1,
                        const std::vector<SparseVec<BigInt>>& gens2) {
    SparseMat<BigInt> L1 = with_relations(g, gens1);
    SparseMat<BigInt> L2 = with_relations(g, gens2);
    auto red1 = reduce_columns(L1.cast<BigInt>(), false);
    auto red2 = reduce_columns(L2.cast<BigInt>(), false);
    for (auto& v : gens1)
        if (!echelon_solve(red2, v)) return false;
    for (auto& v : gens2)
        if (!echelon_solve(red1, v)) return false;
    return true;
}

bool gen_subgroup_full(const GenGroup& g, const std::vector<SparseVec<BigInt>>& gens) {
    std::vector<SparseVec<BigInt>> unit;
    for (int i = 0; i < g.count(); ++i) {
        SparseVec<BigInt> e;
        e.set(i, BigInt(1));
        unit.push_back(e);
    }
    return gen_subgroup_equal(g, gens, unit);
}

bool hom_is_surjective(const GroupHom& h) {
    int nd = h.dst.rank + (int)h.dst.torsion.size();
    int ns = h.src.rank + (int)h.src.torsion.size();
    if (nd == 0) return true;
    // cokernel = dst / (im(m) + dst relations)
    SparseMat<BigInt> rel(nd, ns + (int)h.dst.torsion.size());
    for (int c = 0; c < ns; ++c)
        for (int r = 0; r < nd; ++r)
            if (!h.m[r][c].is_zero()) rel.cols[c].e.push_back({r, h.m[r][c]});
    for (int i = 0; i < (int)h.dst.torsion.size(); ++i)
        rel.cols[ns + i].e.push_back({i, h.dst.torsion[i]});
    QuotientPresentation q(nd, rel);
    return q.group().is_trivial();
}

bool hom_is_isomorphism(const GroupHom& h) {
    // surjective endomorphism-type map between isomorphic f.g. groups is an
    // isomorphism (f.g. abelian groups are Hopfian)
    return h.src == h.dst && hom_is_surjective(h);
}

} // namespace roelab
