// The standing catalog of desk-scale spaces and rules used by the test and
// verification suites.

#pragma once

#include "roelab/space.hpp"

namespace roelab::catalog {

inline AmbientSpec z() { return AmbientSpec::grid(1); }
inline AmbientSpec z2() { return AmbientSpec::grid(2); }
inline AmbientSpec zplus() { return AmbientSpec::halfline(); }
inline AmbientSpec point() { return AmbientSpec::finite({{0}}, {"pt"}); }
inline AmbientSpec pair_space(int d = 1) {
    return AmbientSpec::finite({{0, d}, {d, 0}}, {"a", "b"});
}
inline AmbientSpec z_disjoint_z() {
    return AmbientSpec::free_union({AmbientSpec::grid(1), AmbientSpec::grid(1)});
}
inline AmbientSpec z_disjoint_zplus() {
    return AmbientSpec::free_union({AmbientSpec::grid(1), AmbientSpec::halfline()});
}
inline AmbientSpec point_disjoint_point() {
    return AmbientSpec::free_union({point(), point()});
}

inline AmbientRule identity_rule() {
    return {"id", [](const Coord& p) -> std::optional<Coord> { return p; }};
}

// shift of the final coordinate (grid(1), halfline, and {0,1} x Z products)
inline AmbientRule shift_rule(int delta) {
    return {"shift" + std::to_string(delta), [delta](const Coord& p) -> std::optional<Coord> {
                Coord q = p;
                q.back() += delta;
                return q;
            }};
}

inline AmbientRule halfline_shift() {
    return {"+1", [](const Coord& p) -> std::optional<Coord> {
                Coord q = p;
                q[0] += 1;
                return q;
            }};
}

inline AmbientRule dilation_rule(int factor) {
    return {"x*" + std::to_string(factor), [factor](const Coord& p) -> std::optional<Coord> {
                Coord q = p;
                for (auto& v : q) v *= factor;
                return q;
            }};
}

} // namespace roelab::catalog
