// Bornological coarse spaces as finite metric windows of symbolic ambient
// spaces, plus the coarse-geometric predicates used throughout the workbench:
// controlled/proper maps, closeness, flasqueness certification, U-convexity
// and convex complementary pairs.
//
// Conventions. Entourages are the metric thresholds U_k = {(x,y): d <= k};
// the bornology is minimal (finite subsets); cross-component pairs in free
// unions are "unrelated", encoded by the sentinel distance -1 and never by a
// large integer.

#pragma once

#include "roelab/ints.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace roelab {

using Coord = std::vector<int>;

constexpr int kUnrelated = -1;

struct AmbientSpec {
    enum class Kind { grid, halfline, finite, free_union, product };
    Kind kind = Kind::grid;
    int grid_dim = 1;                         // grid: Z^d with the max metric
    std::vector<std::vector<int>> table;      // finite: symmetric distance table
    std::vector<std::string> point_names;     // finite, optional
    std::vector<AmbientSpec> parts;           // free_union (>=1) / product (2)

    static AmbientSpec grid(int d);
    static AmbientSpec halfline();
    static AmbientSpec finite(std::vector<std::vector<int>> table,
                              std::vector<std::string> names = {});
    static AmbientSpec free_union(std::vector<AmbientSpec> parts);
    static AmbientSpec product(AmbientSpec a, AmbientSpec b);

    // metric axioms of finite tables; throws naming the offending pair/triple
    void validate() const;

    int coord_len() const;
    int num_components() const;
    // id of the coarse component containing p
    int component_of(const Coord& p) const;
    // basepoint of a component (component 0 = the space basepoint)
    Coord component_origin(int component) const;

    // exact ambient distance; nullopt = unrelated (distinct free-union parts)
    std::optional<int> distance(const Coord& p, const Coord& q) const;
    bool contains(const Coord& p) const;

    // all ambient points within `radius` of the center, lexicographic order
    std::vector<Coord> ball(const Coord& center, int radius) const;
};

struct Window {
    AmbientSpec spec;
    std::vector<Coord> pts;               // lexicographically sorted
    std::vector<std::vector<int>> dist;   // -1 = unrelated
    std::vector<int> core;                // sorted point indices
    std::vector<int> component;           // per point
    int core_radius = 0;
    int faithfulness_radius = 0;
    int basepoint = 0;

    int n() const { return (int)pts.size(); }
    int d(int i, int j) const { return dist[i][j]; }
    bool related(int i, int j, int k) const {
        int v = dist[i][j];
        return v >= 0 && v <= k;
    }
    bool in_core(int i) const;
    int index_of(const Coord& p) const; // -1 when absent

    // neighbors {j != i : 0 < d(i,j) <= k}; cached per scale
    const std::vector<std::vector<int>>& adjacency(int k) const;

    // hop metric of the U_k graph restricted to `allowed` (empty = everything);
    // -1 = unreachable
    std::vector<int> hop_distances(int src, int k, const std::vector<char>& allowed = {}) const;

    std::vector<int> ball_indices(int center, int radius) const; // metric ball
    std::vector<int> all_indices() const;

private:
    mutable std::vector<std::vector<std::vector<int>>> adj_cache_;
    mutable std::vector<int> adj_cache_scale_;
};

// Window of all ambient points within core_radius+padding of the component
// origins; core = points within core_radius; faithfulness radius = padding.
Window make_window(const AmbientSpec& spec, int core_radius, int padding);

// ---------------------------------------------------------------------------
// Maps
// ---------------------------------------------------------------------------

// A rule evaluable on ambient coordinates (also outside the window);
// nullopt = not evaluable at that point.
struct AmbientRule {
    std::string name;
    std::function<std::optional<Coord>(const Coord&)> apply;
};

struct SpaceMap {
    const Window* dom = nullptr;
    const Window* cod = nullptr;
    std::vector<int> assign;            // domain index -> codomain index
    std::optional<AmbientRule> rule;    // ambient extension, when known
    bool ambient_proper = false;        // properness certified by the rule's author

    int operator()(int i) const { return assign[i]; }
};

SpaceMap map_from_rule(const Window& dom, const Window& cod, AmbientRule rule,
                       bool ambient_proper);

enum class Properness { proper_by_rule, window_proper, improper };

struct ControlResult {
    std::optional<int> k_out; // least verified bound; nullopt = no finite bound
    Properness properness = Properness::window_proper;
};

ControlResult check_controlled_proper(const SpaceMap& m, int k_in);

// least k with (f(x), g(x)) in U_k for all x; nullopt when some pair of
// images lies in different components
std::optional<int> check_close(const SpaceMap& f, const SpaceMap& g);

// ---------------------------------------------------------------------------
// Flasqueness
// ---------------------------------------------------------------------------

struct FlasquenessWitness {
    int closeness_scale = 0;
    // escape_schedule[r] = n0 such that f^n(window) misses the radius-r ball
    // around every component origin for all n >= n0
    std::vector<int> escape_schedule;
    // control_envelope[k-1] = verified bound on d(f^n x, f^n y) over all n,
    // for window pairs at distance <= k, k = 1..faithfulness_radius
    std::vector<int> control_envelope;
};

struct FlasquenessFailure {
    int condition = 0; // 1 = not close to id, 2 = no escape, 3 = no envelope
    std::string detail;
};

using FlasqueResult = std::variant<FlasquenessWitness, FlasquenessFailure>;

FlasqueResult certify_flasqueness(const Window& w, const AmbientRule& f);

// iterate of a rule on window points, as codomain coordinates
std::optional<Coord> rule_iterate(const AmbientRule& f, Coord x, int n);

// ---------------------------------------------------------------------------
// U-convexity
// ---------------------------------------------------------------------------

struct ConvexityWitness { // a pair related in the ambient with no in-Y path
    int x = 0, y = 0;
    int ambient_hops = 0;
};

struct ConvexityTable {
    std::vector<std::pair<int, int>> kappa; // (n, kappa(n)) for n*k <= r_f
};

using ConvexityResult = std::variant<ConvexityTable, ConvexityWitness>;

ConvexityResult check_u_convex(const Window& w, const std::vector<int>& Y, int k);

// convexity of Y inside the point set `ambient` (paths through `ambient`),
// exposed for the sub-window checks of complementary pairs
ConvexityResult check_u_convex_within(const Window& w, const std::vector<int>& ambient,
                                      const std::vector<int>& Y, int k);

struct ConvexPairVerdict {
    bool covering = false;        // Z union Y_i = window
    bool y_convex = false;
    bool zy_convex_in_z = false;  // Z cap Y_i is U_Z-convex in Z
};

struct ConvexPairReport {
    bool complementary = false; // covering holds from some index on
    int cover_index = -1;       // least covering index, -1 if none
    std::vector<ConvexPairVerdict> per_index;
};

ConvexPairReport check_convex_pair(const Window& w, const std::vector<int>& Z,
                                   const std::vector<std::vector<int>>& family, int k);

} // namespace roelab
