// Executable versions of the four coarse-cohomology axiom proofs:
// the prism chain homotopy (coarse invariance), the Mayer-Vietoris
// pro-isomorphism and long exact sequence (excision), the summation swindle
// (vanishing on flasques), and the free-union decomposition (strong
// additivity). All identities are integer matrix identities with zero
// tolerance.

#pragma once

#include "roelab/chains.hpp"
#include "roelab/cohomology.hpp"

namespace roelab {

// ---------------------------------------------------------------------------
// Prism homotopy. Ordered-normalized cochains only: the prism operators
// descend to the normalized complex but do not preserve alternating cochains.
// ---------------------------------------------------------------------------

// h(phi)(x_0..x_n) = sum_i (-1)^i phi(f x_0,..,f x_i, g x_i,..,g x_n);
// rows = dom degree-n basis, columns = cod degree-(n+1) basis. Throws when
// the codomain scale cannot control the prism tuples.
SparseMat<BigInt> prism_homotopy(const SpaceMap& f, const SpaceMap& g,
                                 const CochainBasis& dom_n, const CochainBasis& cod_n1);

// smallest codomain scale under which all prism tuples are controlled
int prism_required_scale(const SpaceMap& f, const SpaceMap& g, int k);

struct PrismCheck {
    bool identity_holds = false; // d h + h d = g* - f* as integer matrices
    int degree = 0;
    int dom_scale = 0, cod_scale = 0;
    long long entries_compared = 0;
};

// Verifies the homotopy identity at matrix level for one degree, evaluated
// on the support region (row set) given by `support`.
PrismCheck verify_prism_identity(const SpaceMap& f, const SpaceMap& g, int k, int degree,
                                 const std::vector<int>& support, int cod_scale = 0);

// ---------------------------------------------------------------------------
// Big families and complementary pairs
// ---------------------------------------------------------------------------

struct BigFamily {
    std::vector<std::vector<int>> members;        // increasing subsets, sorted indices
    std::vector<std::vector<int>> thicken_index;  // [i][k-1] = least j with U_k[Y_i] in Y_j
};

// verifies monotonicity and the thickening certificate pointwise
BigFamily make_big_family(const Window& w, std::vector<std::vector<int>> members, int k_max);

struct CoveringPair {
    BigFamily family;
    std::vector<int> Z;
    int k = 1;
    int covering_index = -1; // least i: every U_k-bounded set lies in Y_i or Z
};

// throws when no covering index exists within the family
CoveringPair make_complementary_pair(const Window& w, BigFamily family, std::vector<int> Z, int k);

// ---------------------------------------------------------------------------
// Mayer-Vietoris
// ---------------------------------------------------------------------------

struct MvSpot {
    int degree = 0;
    std::string where; // "X", "Y+Z", "cap"
    bool exact = false;
};

struct MvReport {
    bool pro_inverse_restriction = false; // r_i s_i = canonical inclusion
    bool pro_inverse_extension = false;   // s_i r_j = structure map (covering index)
    std::vector<MvSpot> spots;
    bool les_exact = true;
    bool connecting_onto_h1 = false; // delta: H^0(cap) -> H^1(X) surjective
    AbelianGroup h1_x;               // the group delta lands in at degree 0
};

// Verifies the pro-inverse identities of the excision proof and the long
// exact Mayer-Vietoris sequence of the square on windowed groups. Degrees
// are tested at support radius `support_radius` with the radius ladder
// rho(n) = support_radius + n*k; margin supports sit `margin_gap` further out.
MvReport mv_check(const Window& w, const CoveringPair& pair, const std::vector<int>& degrees,
                  int support_radius, int margin_gap, const WindowedOptions& opt = {});

// ---------------------------------------------------------------------------
// Flasqueness swindle
// ---------------------------------------------------------------------------

struct SwindleResult {
    std::shared_ptr<CochainBasis> basis; // scale k_target, evaluation region
    SparseVec<BigInt> s_phi;             // S(phi) = sum_n (f^n)^* phi
    int terms = 0;                       // certified summand count
    bool identity_ok = false;            // f^* S(phi) + r(phi) = S(phi), exact
};

// pre: phi's scale dominates the witness envelope at k_target and supp(phi)
// lies inside the escape-scheduled core.
SwindleResult swindle_apply(const Window& w, const AmbientRule& f, const FlasquenessWitness& wit,
                            const CochainBasis& phi_basis, const SparseVec<BigInt>& phi,
                            int k_target);

// ---------------------------------------------------------------------------
// Strong additivity
// ---------------------------------------------------------------------------

struct AdditivityDegree {
    int degree = 0;
    AbelianGroup whole, sum;
    bool groups_equal = false;
    bool projections_iso = false; // excision projections induce the isomorphism
};

struct AdditivityReport {
    std::vector<AdditivityDegree> degrees;
    bool ok = true;
};

AdditivityReport additivity_check(const std::vector<AmbientSpec>& parts,
                                  const std::vector<int>& degrees, const std::vector<int>& scales,
                                  const WindowSchedule& schedule, const WindowedOptions& opt = {});

// ---------------------------------------------------------------------------
// Audited class pairing (chains_pairing)
// ---------------------------------------------------------------------------

struct PairingAudit {
    BigInt value;
    bool well_defined = false; // invariant under (co)boundary perturbations
    int trials = 0;
};

// Pairs a cocycle class with a rule-given cycle class and audits
// well-definedness by perturbing both sides; throws on degree mismatch,
// returns well_defined=false when the window/scale is too small.
PairingAudit pair_classes(const Window& w, int k, Backend backend, const CochainBasis& phi_basis,
                          const SparseVec<BigInt>& phi, const ChainRule& cycle_rule, int degree,
                          std::uint64_t seed, int trials);

} // namespace roelab
