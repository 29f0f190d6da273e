// The windowed-approximation protocol for coarse ordinary cohomology
//   HAX^n(X) = lim_k colim_j H( C_k(X, core_j) ),
// with stabilization detection in window index, coboundary margin, and scale.
//
// Entry j of a window tower is Z^n_j / B^n_{j,m}:
//   Z^n_j   = integer cocycles supported in core_j, the cocycle condition
//             evaluated on the full faithful window,
//   B^n_{j,m} = coboundaries d(psi) of cochains psi supported in core_{j+m}
//             that happen to land in cochains supported in core_j.
// Structure maps are induced by core inclusions. Reports carry a confidence
// flag; the protocol never silently claims exactness for the ambient space.

#pragma once

#include "roelab/complex.hpp"
#include "roelab/snf.hpp"
#include "roelab/space.hpp"

#include <memory>
#include <vector>

namespace roelab {

struct WindowSchedule {
    // increasing (core_radius, padding) pairs
    std::vector<std::pair<int, int>> steps;
    int margin = 2; // coboundary-search margin, in schedule steps

    // padding_j >= k * (degree_cap + 2) for every step and active scale
    void validate(int k, int degree_cap) const;

    // evenly spaced cores up to core_max with protocol padding
    static WindowSchedule standard(int core_max, int num_steps, int k_max, int degree_cap,
                                   int margin = 2);
};

struct WindowedOptions {
    Backend backend = Backend::alternating;
    EnumerationOptions enumeration;
};

struct TowerEntry {
    AbelianGroup group;
    std::shared_ptr<Cohomology> H;          // coordinates/representatives machine
    std::shared_ptr<CochainBasis> basis;    // cochain basis the representatives index into
    int core_radius = 0;                    // support core of this entry
    int margin_core_radius = 0;             // core of the coboundary search
};

struct Tower {
    enum class Direction { colimit_window, limit_scale };
    Direction direction = Direction::colimit_window;
    std::shared_ptr<Window> window; // owns the window the entry bases live on
    std::vector<TowerEntry> entries;
    std::vector<GroupHom> maps; // colimit: j -> j+1; limit: entry i+1 -> entry i
    std::vector<int> index;     // colimit: core radii; limit: scales

    bool stabilized = false;   // final pair isomorphic via its structure map
    int stable_index = -1;     // first index from which all maps are isomorphisms
    bool maps_verified = false; // homomorphism property checked on representatives
};

// One tower entry at explicit core radii, exposed for the verification
// suites; `w` must faithfully contain the k-thickening of the margin core.
TowerEntry windowed_entry(const Window& w, int k, int degree, int core_radius,
                          int margin_core_radius, const WindowedOptions& opt = {});

// Entry on a subspace of the window (Y with the restricted entourage): all
// simplices and thickenings stay inside `subspace`; support regions are
// explicit point sets contained in it.
TowerEntry windowed_entry_in(const Window& w, int k, int degree, std::vector<int> support,
                             std::vector<int> margin_support, const std::vector<int>& subspace,
                             const WindowedOptions& opt = {});

// Window tower (colimit direction) for one scale and degree.
Tower windowed_cohomology(const AmbientSpec& spec, int k, int degree,
                          const WindowSchedule& schedule, const WindowedOptions& opt = {});

// Scale tower (limit direction) built from stabilized window towers; throws
// on an unstabilized input tower.
Tower scale_tower(const AmbientSpec& spec, int degree, const std::vector<int>& scales,
                  const WindowSchedule& schedule, const WindowedOptions& opt = {});

enum class Confidence { exact_on_window, heuristic };

struct DegreeReport {
    int degree = 0;
    AbelianGroup group;
    int window_core = 0;  // core radius at stabilization
    int scale = 0;        // smallest scale of the verified range
    bool mittag_leffler = false;
    bool lim1_zero = false;     // reported zero only under verified surjectivity
    bool lim1_known = false;    // false = "undetermined"
    Confidence confidence = Confidence::heuristic;
};

struct StabilizationReport {
    std::vector<DegreeReport> degrees;
    const DegreeReport& at_degree(int n) const;
};

// Full protocol: per degree the Mittag-Leffler limit of the scale tower with
// confidence flags (window index, margin, and scale stabilization all
// verified for "exact-on-window").
StabilizationReport hax(const AmbientSpec& spec, const std::vector<int>& degrees,
                        const std::vector<int>& scales, const WindowSchedule& schedule,
                        const WindowedOptions& opt = {});

// points within r of their component origin
std::vector<int> radius_region(const Window& w, int r);

// kernel basis with int64 fast path and BigInt escalation
SparseMat<BigInt> integer_kernel(const SparseMat<BigInt>& M);

} // namespace roelab
