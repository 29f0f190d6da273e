// Controlled locally finite chains on windows and the Kronecker pairing with
// coarse cochains. Locally finite ambient chains are represented by a window
// fragment together with the ambient rule that generated it; the pairing is
// exact against the ambient chain because cochains have finite support.

#pragma once

#include "roelab/complex.hpp"

#include <functional>

namespace roelab {

// coefficient of an ambient simplex, given by its vertex coordinates in the
// backend's normal form (sorted for alternating)
struct ChainRule {
    std::string name;
    std::function<BigInt(const std::vector<Coord>&)> coeff;
};

struct SparseChain {
    std::shared_ptr<const CochainBasis> basis; // simplices the chain lives on
    SparseVec<BigInt> coeffs;
    bool truncated = false; // fragment of an ambient locally finite chain
    std::string rule_name;

    int degree() const { return basis->degree; }
    int scale() const { return basis->scale; }
};

inline SparseChain chain_from_rule(std::shared_ptr<const CochainBasis> basis,
                                   const ChainRule& rule) {
    SparseChain c;
    c.basis = basis;
    c.truncated = true;
    c.rule_name = rule.name;
    const Window& w = *basis->w;
    for (int i = 0; i < basis->size(); ++i) {
        std::vector<Coord> verts;
        for (int v : basis->simplices[i]) verts.push_back(w.pts[v]);
        BigInt a = rule.coeff(verts);
        if (!a.is_zero()) c.coeffs.set(i, a);
    }
    return c;
}

// boundary = sum_i (-1)^i (drop vertex i): rows = b_prev (degree n-1),
// columns = b_n. pre: b_prev covers all faces of b_n's simplices.
inline SparseMat<BigInt> boundary_matrix(const CochainBasis& b_n, const CochainBasis& b_prev) {
    if (b_prev.degree != b_n.degree - 1) throw Error("boundary_matrix: degree mismatch");
    if (b_prev.backend != b_n.backend || b_prev.scale != b_n.scale)
        throw Error("boundary_matrix: backend/scale mismatch");
    SparseMat<BigInt> M(b_prev.size(), b_n.size());
    for (int col = 0; col < b_n.size(); ++col) {
        const auto& tau = b_n.simplices[col];
        std::vector<int> face(tau.size() - 1);
        for (int i = 0; i < (int)tau.size(); ++i) {
            for (int j = 0, t = 0; j < (int)tau.size(); ++j)
                if (j != i) face[t++] = tau[j];
            if (b_n.backend == Backend::ordered_normalized) {
                bool degenerate = false;
                for (std::size_t j = 0; j + 1 < face.size(); ++j)
                    if (face[j] == face[j + 1]) degenerate = true;
                if (degenerate) continue;
            }
            int r = b_prev.find(face);
            if (r < 0) throw Error("boundary_matrix: face missing from the target basis");
            M.add(r, col, BigInt(i % 2 == 0 ? 1 : -1));
        }
    }
    return M;
}

// <phi, c> = sum_sigma c(sigma) phi(sigma); the bases may differ (matched by
// simplex), but degree, scale and backend must agree.
inline BigInt kronecker_pair(const CochainBasis& phi_basis, const SparseVec<BigInt>& phi,
                             const SparseChain& c) {
    if (phi_basis.degree != c.degree()) throw Error("kronecker_pair: degree mismatch");
    if (phi_basis.scale != c.scale() || phi_basis.backend != c.basis->backend)
        throw Error("kronecker_pair: scale/backend mismatch");
    BigInt acc(0);
    for (auto& [i, a] : c.coeffs.e) {
        int j = phi_basis.find(c.basis->simplices[i]);
        if (j >= 0) acc += a * phi.at(j);
    }
    return acc;
}

} // namespace roelab
