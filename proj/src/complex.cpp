#include "roelab/complex.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <omp.h>
#include <sstream>

namespace roelab {

std::uint64_t pack_tuple(const std::vector<int>& t) {
    std::uint64_t key = 0;
    for (int v : t) key = (key << 16) | (std::uint64_t)(v + 1); // +1 so 0 marks "empty"
    return key;
}

void CochainBasis::build_index() {
    index_.clear();
    index_.reserve(simplices.size() * 2);
    for (int i = 0; i < (int)simplices.size(); ++i) index_[pack_tuple(simplices[i])] = i;
}

int CochainBasis::find(const std::vector<int>& tuple) const {
    auto it = index_.find(pack_tuple(tuple));
    return it == index_.end() ? -1 : it->second;
}

namespace {

void check_enumeration_pre(const Window& w, int degree, const EnumerationOptions& opt) {
    if (degree < 0) throw Error("degree must be nonnegative");
    if (degree > opt.degree_cap)
        throw Error("degree cap exceeded: degree " + std::to_string(degree) + " > cap " +
                    std::to_string(opt.degree_cap));
    if (w.n() >= (1 << 16) - 1) throw BudgetExceeded("window too large for tuple packing");
}

// candidates for the next vertex after `chosen`, ordered_normalized backend:
// any region point within k of every chosen vertex, distinct from the last
void ordered_extend(const Window& w, int k, const std::vector<int>& region,
                    std::vector<int>& chosen, int remaining, long long budget,
                    std::vector<std::vector<int>>& out) {
    if (remaining == 0) {
        if ((long long)out.size() >= budget) throw BudgetExceeded("simplex budget exceeded");
        out.push_back(chosen);
        return;
    }
    for (int v : region) {
        if (v == chosen.back()) continue;
        bool ok = true;
        for (int u : chosen)
            if (!(u == v) && !w.related(u, v, k)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        chosen.push_back(v);
        ordered_extend(w, k, region, chosen, remaining - 1, budget, out);
        chosen.pop_back();
    }
}

void alternating_extend(const Window& w, int k, const std::vector<int>& region,
                        std::vector<int>& chosen, int remaining, long long budget,
                        std::vector<std::vector<int>>& out) {
    if (remaining == 0) {
        if ((long long)out.size() >= budget) throw BudgetExceeded("simplex budget exceeded");
        out.push_back(chosen);
        return;
    }
    auto it = std::upper_bound(region.begin(), region.end(), chosen.back());
    for (; it != region.end(); ++it) {
        int v = *it;
        bool ok = true;
        for (int u : chosen)
            if (!w.related(u, v, k)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        chosen.push_back(v);
        alternating_extend(w, k, region, chosen, remaining - 1, budget, out);
        chosen.pop_back();
    }
}

} // namespace

CochainBasis enumerate_controlled_simplices_serial(const Window& w, int k, int degree,
                                                   std::vector<int> region, Backend backend,
                                                   const EnumerationOptions& opt) {
    check_enumeration_pre(w, degree, opt);
    std::sort(region.begin(), region.end());
    region.erase(std::unique(region.begin(), region.end()), region.end());

    CochainBasis b;
    b.w = &w;
    b.degree = degree;
    b.scale = k;
    b.backend = backend;
    b.region = region;

    for (int v : region) {
        std::vector<int> chosen = {v};
        if (backend == Backend::alternating)
            alternating_extend(w, k, region, chosen, degree, opt.budget, b.simplices);
        else
            ordered_extend(w, k, region, chosen, degree, opt.budget, b.simplices);
    }
    std::sort(b.simplices.begin(), b.simplices.end());
    b.build_index();
    return b;
}

CochainBasis enumerate_controlled_simplices(const Window& w, int k, int degree,
                                            std::vector<int> region, Backend backend,
                                            const EnumerationOptions& opt) {
    check_enumeration_pre(w, degree, opt);
    std::sort(region.begin(), region.end());
    region.erase(std::unique(region.begin(), region.end()), region.end());

    CochainBasis b;
    b.w = &w;
    b.degree = degree;
    b.scale = k;
    b.backend = backend;
    b.region = region;

    std::vector<char> in_region(w.n(), 0);
    for (int v : region) in_region[v] = 1;
    w.adjacency(k); // prime the cache before the parallel region

    // per-vertex neighbor lists restricted to the region; alternating keeps
    // only forward neighbors
    std::vector<std::vector<int>> nbr(w.n());
    for (int v : region) {
        for (int u : w.adjacency(k)[v])
            if (in_region[u] && (backend == Backend::ordered_normalized || u > v))
                nbr[v].push_back(u);
        std::sort(nbr[v].begin(), nbr[v].end());
    }

    int nv = (int)region.size();
    std::vector<std::vector<std::vector<int>>> blocks(nv);
    std::atomic<long long> produced{0};
    std::exception_ptr err;

#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (int vi = 0; vi < nv; ++vi) {
        try {
            int v0 = region[vi];
            auto& out = blocks[vi];
            if (degree == 0) {
                out.push_back({v0});
                produced.fetch_add(1);
                continue;
            }
            std::vector<int> chosen = {v0};
            // initial candidates: region points compatible with v0
            std::vector<int> first = nbr[v0];
            if (backend == Backend::ordered_normalized) {
                first.push_back(v0); // revisits at non-consecutive positions
                std::sort(first.begin(), first.end());
            }
            std::function<void(const std::vector<int>&)> dfs =
                [&](const std::vector<int>& cands) {
                    for (int v : cands) {
                        if (backend == Backend::ordered_normalized && v == chosen.back()) continue;
                        chosen.push_back(v);
                        if ((int)chosen.size() == degree + 1) {
                            if (produced.fetch_add(1) + 1 > opt.budget)
                                throw BudgetExceeded("simplex budget exceeded");
                            out.push_back(chosen);
                        } else {
                            std::vector<int> next;
                            next.reserve(cands.size());
                            for (int u : cands) {
                                if (backend == Backend::alternating && u <= v) continue;
                                if (u == v || w.related(u, v, k)) next.push_back(u);
                            }
                            dfs(next);
                        }
                        chosen.pop_back();
                    }
                };
            dfs(first);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    long long total = 0;
    for (auto& blk : blocks) total += (long long)blk.size();
    if (total > opt.budget) throw BudgetExceeded("simplex budget exceeded");

    b.simplices.reserve(total);
    for (auto& blk : blocks) {
        std::sort(blk.begin(), blk.end());
        for (auto& s : blk) b.simplices.push_back(std::move(s));
    }
    b.build_index();
    return b;
}

CochainBasis relative_basis(const Window& w, int k, int degree, std::vector<int> region,
                            const std::vector<int>& Y, Backend backend,
                            const EnumerationOptions& opt) {
    CochainBasis full = enumerate_controlled_simplices(w, k, degree, std::move(region), backend, opt);
    std::vector<char> in_y(w.n(), 0);
    for (int v : Y) in_y[v] = 1;
    CochainBasis out = full;
    out.simplices.clear();
    for (auto& s : full.simplices) {
        bool contained = true;
        for (int v : s)
            if (!in_y[v]) {
                contained = false;
                break;
            }
        if (!contained) out.simplices.push_back(s);
    }
    out.build_index();
    return out;
}

std::vector<int> thicken_region(const Window& w, const std::vector<int>& region, int k) {
    std::vector<char> mark(w.n(), 0);
    for (int v : region) {
        mark[v] = 1;
        for (int u : w.adjacency(k)[v]) mark[u] = 1;
    }
    std::vector<int> out;
    for (int i = 0; i < w.n(); ++i)
        if (mark[i]) out.push_back(i);
    return out;
}

SparseMat<BigInt> coboundary_matrix_rows(const CochainBasis& b_n, const CochainBasis& b_next);

SparseMat<BigInt> coboundary_matrix(const CochainBasis& b_n, const CochainBasis& b_next) {
    if (b_n.backend != b_next.backend || b_n.scale != b_next.scale)
        throw Error("coboundary_matrix: backend/scale mismatch");
    if (b_next.degree != b_n.degree + 1) throw Error("coboundary_matrix: degree mismatch");

    // padding condition: b_next covers U_k[b_n.region]
    std::vector<char> have(b_n.w->n(), 0);
    for (int v : b_next.region) have[v] = 1;
    std::vector<int> required = thicken_region(*b_n.w, b_n.region, b_n.scale);
    for (int v : required)
        if (!have[v]) {
            std::ostringstream os;
            os << "window too small: coboundary target region must contain U_"
               << b_n.scale << "[source region] (" << required.size()
               << " points); first missing point index " << v;
            throw WindowTooSmall(os.str());
        }
    return coboundary_matrix_rows(b_n, b_next);
}

SparseMat<BigInt> coboundary_matrix_rows(const CochainBasis& b_n, const CochainBasis& b_next) {
    if (b_n.backend != b_next.backend || b_n.scale != b_next.scale)
        throw Error("coboundary_matrix: backend/scale mismatch");
    if (b_next.degree != b_n.degree + 1) throw Error("coboundary_matrix: degree mismatch");

    // rows in parallel into per-row buffers, then a serial column assembly
    std::vector<std::vector<std::pair<int, int>>> row_entries(b_next.size()); // (col, coef)
#pragma omp parallel for schedule(static)
    for (int row = 0; row < b_next.size(); ++row) {
        const auto& tau = b_next.simplices[row];
        std::vector<int> face(tau.size() - 1);
        auto& entries = row_entries[row];
        for (int i = 0; i < (int)tau.size(); ++i) {
            for (int j = 0, t = 0; j < (int)tau.size(); ++j)
                if (j != i) face[t++] = tau[j];
            if (b_next.backend == Backend::ordered_normalized) {
                bool degenerate = false;
                for (std::size_t j = 0; j + 1 < face.size(); ++j)
                    if (face[j] == face[j + 1]) {
                        degenerate = true;
                        break;
                    }
                if (degenerate) continue;
            }
            int col = b_n.find(face);
            if (col < 0) continue; // face outside the source region
            entries.push_back({col, i % 2 == 0 ? 1 : -1});
        }
        // accumulate repeated faces
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<int, int>> acc;
        for (auto& [c, s] : entries) {
            if (!acc.empty() && acc.back().first == c) acc.back().second += s;
            else acc.push_back({c, s});
        }
        entries.clear();
        for (auto& [c, s] : acc)
            if (s != 0) entries.push_back({c, s});
    }
    SparseMat<BigInt> M(b_next.size(), b_n.size());
    for (int row = 0; row < b_next.size(); ++row)
        for (auto& [col, s] : row_entries[row]) M.cols[col].e.push_back({row, BigInt(s)});
    return M;
}

BigInt evaluate_cochain(const CochainBasis& basis, const SparseVec<BigInt>& phi,
                        std::vector<int> tuple) {
    if ((int)tuple.size() != basis.degree + 1) throw Error("evaluate_cochain: degree mismatch");
    int sign = 1;
    if (basis.backend == Backend::alternating) {
        // sort with sign; repeated vertices kill the value
        for (std::size_t i = 0; i < tuple.size(); ++i)
            for (std::size_t j = i + 1; j < tuple.size(); ++j) {
                if (tuple[i] == tuple[j]) return 0;
                if (tuple[i] > tuple[j]) {
                    std::swap(tuple[i], tuple[j]);
                    sign = -sign;
                }
            }
    } else {
        for (std::size_t j = 0; j + 1 < tuple.size(); ++j)
            if (tuple[j] == tuple[j + 1]) return 0; // degenerate
    }
    int idx = basis.find(tuple);
    if (idx < 0) return 0;
    return BigInt(sign) * phi.at(idx);
}

BigInt evaluate_cochain_coords(const CochainBasis& basis, const SparseVec<BigInt>& phi,
                               const std::vector<Coord>& verts) {
    std::vector<int> tuple(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
        int idx = basis.w->index_of(verts[i]);
        if (idx < 0) return 0; // outside the window, outside the support
        tuple[i] = idx;
    }
    return evaluate_cochain(basis, phi, std::move(tuple));
}

SparseMat<BigInt> pullback_matrix(const SpaceMap& m, const CochainBasis& dom_basis,
                                  const CochainBasis& cod_basis) {
    if (dom_basis.degree != cod_basis.degree) throw Error("pullback: degree mismatch");
    if (dom_basis.backend != cod_basis.backend) throw Error("pullback: backend mismatch");
    const Window& cod = *m.cod;

    SparseMat<BigInt> M(dom_basis.size(), cod_basis.size());
    for (int row = 0; row < dom_basis.size(); ++row) {
        const auto& sigma = dom_basis.simplices[row];
        std::vector<int> image(sigma.size());
        for (std::size_t i = 0; i < sigma.size(); ++i) image[i] = m(sigma[i]);
        for (std::size_t a = 0; a < image.size(); ++a)
            for (std::size_t b = a + 1; b < image.size(); ++b)
                if (!(image[a] == image[b]) && !cod.related(image[a], image[b], cod_basis.scale))
                    throw Error("pullback: map image not controlled at the codomain scale");
        // evaluate the indicator of each codomain simplex on the image tuple
        std::vector<int> t = image;
        int sign = 1;
        bool zero = false;
        if (cod_basis.backend == Backend::alternating) {
            for (std::size_t i = 0; i < t.size() && !zero; ++i)
                for (std::size_t j = i + 1; j < t.size(); ++j) {
                    if (t[i] == t[j]) {
                        zero = true;
                        break;
                    }
                    if (t[i] > t[j]) {
                        std::swap(t[i], t[j]);
                        sign = -sign;
                    }
                }
        } else {
            for (std::size_t j = 0; j + 1 < t.size(); ++j)
                if (t[j] == t[j + 1]) zero = true;
        }
        if (zero) continue;
        int col = cod_basis.find(t);
        if (col < 0) continue; // image outside the codomain region
        M.add(row, col, BigInt(sign));
    }
    return M;
}

SparseMat<BigInt> scale_restriction_matrix(const CochainBasis& b_k, const CochainBasis& b_kk) {
    if (b_k.degree != b_kk.degree || b_k.backend != b_kk.backend)
        throw Error("scale restriction: degree/backend mismatch");
    if (b_k.scale > b_kk.scale) throw Error("scale restriction: target scale must be smaller");
    SparseMat<BigInt> M(b_k.size(), b_kk.size());
    for (int row = 0; row < b_k.size(); ++row) {
        int col = b_kk.find(b_k.simplices[row]);
        if (col < 0)
            throw Error("scale restriction: fine-scale basis misses a coarse-scale simplex");
        M.add(row, col, BigInt(1));
    }
    return M;
}

SparseMat<BigInt> basis_inclusion_matrix(const CochainBasis& from, const CochainBasis& to) {
    SparseMat<BigInt> M(to.size(), from.size());
    for (int c = 0; c < from.size(); ++c) {
        int r = to.find(from.simplices[c]);
        if (r < 0) throw Error("basis inclusion: simplex missing from the larger basis");
        M.add(r, c, BigInt(1));
    }
    return M;
}

} // namespace roelab
